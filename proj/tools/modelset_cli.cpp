#include <cstdio>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "modelset/runner.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

int main(int argc, char** argv) {
  CLI::App app{"Model sets, autocorrelation and diffraction experiments"};
  app.require_subcommand(1);
  std::string config_path, out_dir;
  std::uint64_t seed = 0;
  int threads = 0;
  app.add_option("--config", config_path, "JSON experiment configuration")->required();
  app.add_option("--out", out_dir, "output directory (overrides the configuration)");
  app.add_option("--seed", seed, "random seed (overrides the configuration)");
  app.add_option("--threads", threads, "OpenMP thread count")->check(CLI::PositiveNumber);
  for (const char* name : {"autocorr", "peaks", "verify-poisson", "consistency", "heisenberg", "diagnose-sequence"})
    app.add_subcommand(name)->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    modelset::ExperimentConfig cfg = modelset::load_config(config_path);
    cfg.pipeline = app.get_subcommands().front()->get_name();
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    if (app.count("--seed")) cfg.seed = seed;
#ifdef _OPENMP
    if (threads > 0) omp_set_num_threads(threads);
#endif
    const modelset::RunResult r = modelset::run(cfg);
    std::cout << r.report_json;
    return modelset::exit_code(r);
  } catch (const modelset::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
