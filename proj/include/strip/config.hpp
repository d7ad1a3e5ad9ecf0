#pragma once

#include <string>

#include "strip/bubble.hpp"
#include "strip/geometry.hpp"
#include "strip/model.hpp"
#include "strip/norms.hpp"
#include "strip/projection.hpp"
#include "strip/quad.hpp"

namespace strip {

struct RunConfig {
  Geometry geometry;
  CurvatureModel model;
  BubbleParams bubble;
  double theta = 0.05;
  QuadratureSpec quadrature;
  ProjectionConfig projection;
  std::vector<double> l_grid;
  std::vector<double> lambda_grid;
};

/// Default experiment: N=6, k=4, h=2, kbar=1, L=16, default model, theta
/// 0.05, lambda 50.
RunConfig default_config();

RunConfig load_config(const std::string& path);
void save_config(const RunConfig& cfg, const std::string& path);
std::string config_to_json(const RunConfig& cfg);
RunConfig config_from_json(const std::string& text);

}  // namespace strip
