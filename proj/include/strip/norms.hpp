#pragma once

#include "strip/bubble.hpp"
#include "strip/geometry.hpp"
#include "strip/model.hpp"
#include "strip/projection.hpp"
#include "strip/stats.hpp"

namespace strip {

struct NormWeights {
  double theta = 0.05;
  double lambda = 1.0;
  std::vector<double> zhat;
  int lattice_radius = 20;

  double tau(const Geometry& g) const { return g.half_nm2() - theta; }
};

std::vector<std::string> validate_norm_weights(const NormWeights& w,
                                               const Geometry& g);

/// sigma(x) = min{1, ((1 + lambda|y| + lambda|z - zhat|)/lambda)^tau}.
double sigma_eval(const Point& x, const NormWeights& w, const Geometry& g);

/// Denominator of ||.||_*: sigma(x) sum_j lambda^{(N-2)/2} /
/// (1 + lambda|y| + lambda|z - zhat_L^j|)^{(N-2)/2 + tau}.
double star_weight(const Point& x, const NormWeights& w, const Geometry& g);

/// Denominator of ||.||_**; infinite on |y| = 0.
double starstar_weight(const Point& x, const NormWeights& w,
                       const Geometry& g);

enum class NormMode { star, starstar };

struct SampleGrid {
  std::vector<Point> points;
  std::string description;
};

/// Near-bubble shells (lambda*dist log-spaced 1e-2..1e2), O(1)-distance and
/// slab-boundary points, and far-field points. density scales the number of
/// shells/directions (1 = default, 2 = twice as fine).
SampleGrid make_sample_grid(const Geometry& g, const NormWeights& w,
                            int density = 1);

struct NormResult {
  double value = 0.0;
  int argmax = -1;     // index into the grid
  int excluded = 0;    // |y| = 0 points skipped in starstar mode
};

NormResult weighted_norm(const std::vector<double>& u_values,
                         const SampleGrid& grid, const NormWeights& w,
                         const Geometry& g, NormMode mode);

/// l(x) = (M(x) PW^{2#-1} - W^{2#-1})/|y|, assembled through phi = W - PW in
/// expm1/log1p form so the near-core cancellation survives large lambda.
double l_term_eval(const Point& x, const BubbleParams& p, const Geometry& g,
                   const CurvatureModel& m, const ProjectionConfig& cfg);

/// N(omega) at a point, given PW(x) and omega(x):
/// M(x) [ (pw + omega)_+^{2#-1} - pw^{2#-1} - (2#-1) pw^{2#-2} omega ] / |y|.
double nonlinear_remainder(const Point& x, double pw_value, double omega_value,
                           const CurvatureModel& m, const Geometry& g);

}  // namespace strip
