#include "strip/config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace strip {

using nlohmann::json;

RunConfig default_config() {
  RunConfig cfg;
  cfg.geometry = Geometry{6, 4, 2, 1, 16.0};
  cfg.model = default_model(cfg.geometry);
  cfg.bubble.zhat.assign(cfg.geometry.h, 0.0);
  cfg.bubble.lambda = 50.0;
  cfg.theta = 0.05;
  cfg.l_grid = {8.0, 16.0, 32.0};
  cfg.lambda_grid = {};
  return cfg;
}

namespace {

json to_json_obj(const RunConfig& cfg) {
  json j;
  j["geometry"] = {{"N", cfg.geometry.N},
                   {"k", cfg.geometry.k},
                   {"h", cfg.geometry.h},
                   {"kbar", cfg.geometry.kbar},
                   {"L", cfg.geometry.L}};
  j["model"] = {{"a", cfg.model.a},
                {"beta", cfg.model.beta},
                {"delta", cfg.model.delta},
                {"kappa", cfg.model.kappa}};
  j["bubble"] = {{"lambda", cfg.bubble.lambda}, {"zhat", cfg.bubble.zhat}};
  j["theta"] = cfg.theta;
  j["quadrature"] = {{"rel_tol", cfg.quadrature.rel_tol},
                     {"max_panel_doublings", cfg.quadrature.max_panel_doublings},
                     {"mc_samples", cfg.quadrature.mc_samples},
                     {"mc_seed", cfg.quadrature.mc_seed}};
  j["projection"] = {{"lattice_radius", cfg.projection.lattice_radius},
                     {"complement_samples", cfg.projection.complement_samples},
                     {"seed", cfg.projection.seed}};
  j["grids"] = {{"L_grid", cfg.l_grid}, {"lambda_grid", cfg.lambda_grid}};
  return j;
}

RunConfig from_json_obj(const json& j) {
  RunConfig cfg = default_config();
  if (j.contains("geometry")) {
    const auto& jg = j.at("geometry");
    cfg.geometry.N = jg.value("N", cfg.geometry.N);
    cfg.geometry.k = jg.value("k", cfg.geometry.k);
    cfg.geometry.h = jg.value("h", cfg.geometry.h);
    cfg.geometry.kbar = jg.value("kbar", cfg.geometry.kbar);
    cfg.geometry.L = jg.value("L", cfg.geometry.L);
  }
  if (j.contains("model")) {
    const auto& jm = j.at("model");
    cfg.model = default_model(cfg.geometry);
    if (jm.contains("a")) cfg.model.a = jm.at("a").get<std::vector<double>>();
    if (jm.contains("beta"))
      cfg.model.beta = jm.at("beta").get<std::vector<double>>();
    cfg.model.delta = jm.value("delta", cfg.model.delta);
    cfg.model.kappa = jm.value("kappa", cfg.model.kappa);
  } else {
    cfg.model = default_model(cfg.geometry);
  }
  if (j.contains("bubble")) {
    const auto& jb = j.at("bubble");
    cfg.bubble.lambda = jb.value("lambda", cfg.bubble.lambda);
    if (jb.contains("zhat"))
      cfg.bubble.zhat = jb.at("zhat").get<std::vector<double>>();
  }
  cfg.bubble.zhat.resize(cfg.geometry.h, 0.0);
  cfg.theta = j.value("theta", cfg.theta);
  if (j.contains("quadrature")) {
    const auto& jq = j.at("quadrature");
    cfg.quadrature.rel_tol = jq.value("rel_tol", cfg.quadrature.rel_tol);
    cfg.quadrature.max_panel_doublings =
        jq.value("max_panel_doublings", cfg.quadrature.max_panel_doublings);
    cfg.quadrature.mc_samples =
        jq.value("mc_samples", cfg.quadrature.mc_samples);
    cfg.quadrature.mc_seed = jq.value("mc_seed", cfg.quadrature.mc_seed);
  }
  if (j.contains("projection")) {
    const auto& jp = j.at("projection");
    cfg.projection.lattice_radius =
        jp.value("lattice_radius", cfg.projection.lattice_radius);
    cfg.projection.complement_samples =
        jp.value("complement_samples", cfg.projection.complement_samples);
    cfg.projection.seed = jp.value("seed", cfg.projection.seed);
  }
  if (j.contains("grids")) {
    const auto& jr = j.at("grids");
    if (jr.contains("L_grid"))
      cfg.l_grid = jr.at("L_grid").get<std::vector<double>>();
    if (jr.contains("lambda_grid"))
      cfg.lambda_grid = jr.at("lambda_grid").get<std::vector<double>>();
  }
  return cfg;
}

}  // namespace

std::string config_to_json(const RunConfig& cfg) {
  return to_json_obj(cfg).dump(2);
}

RunConfig config_from_json(const std::string& text) {
  return from_json_obj(json::parse(text));
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return config_from_json(ss.str());
}

void save_config(const RunConfig& cfg, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write config: " + path);
  out << config_to_json(cfg) << "\n";
}

}  // namespace strip
