// Batch front-end: reads a JSON config, runs one of the verification
// commands, writes a JSON report (and CSV scaling tables for norm-check).
#include <cstdlib>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "strip/cli.hpp"
#include "strip/parallel.hpp"

int main(int argc, char** argv) {
  CLI::App app{"strip-domain bubble verification tool"};
  std::string command;
  std::string config_path;
  std::string out_path;
  long long seed = -1;
  int threads = 0;

  app.add_option("command", command,
                 "validate | constants | lattice | project-check | "
                 "norm-check | reduce | consistency | report-all")
      ->required();
  app.add_option("--config", config_path, "JSON config path");
  app.add_option("--out", out_path, "report output path (JSON; norm-check "
                                    "also writes <out>.csv)");
  app.add_option("--seed", seed, "override Monte Carlo seeds");
  app.add_option("--threads", threads, "worker threads (0 = hardware)");

  CLI11_PARSE(app, argc, argv);

  if (threads == 0) {
    if (const char* env = std::getenv("STRIP_THREADS"))
      threads = std::atoi(env);
  }
  if (threads > 0) strip::set_thread_count(threads);

  strip::RunConfig cfg;
  try {
    cfg = config_path.empty() ? strip::default_config()
                              : strip::load_config(config_path);
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return strip::kValidationFailure;
  }
  if (seed >= 0) {
    cfg.quadrature.mc_seed = static_cast<std::uint64_t>(seed);
    cfg.projection.seed = static_cast<std::uint64_t>(seed);
  }

  std::string report, csv;
  int code = 0;
  try {
    code = strip::run_command(command, cfg, report, csv);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return strip::kToleranceFailure;
  }

  if (out_path.empty()) {
    std::cout << report << "\n";
  } else {
    std::ofstream out(out_path);
    out << report << "\n";
    if (!csv.empty()) {
      std::ofstream c(out_path + ".csv");
      c << csv;
    }
  }
  return code;
}
