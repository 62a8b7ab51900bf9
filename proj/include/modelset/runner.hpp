#pragma once

#include <string>
#include <vector>

#include "modelset/config.hpp"

namespace modelset {

struct RunResult {
  bool pass = true;
  std::vector<std::string> files;  // written into cfg.out_dir
  std::string report_json;         // contents of report.json
};

/// Runs cfg.pipeline, writes CSV outputs and report.json into cfg.out_dir.
/// Tolerance failures set pass = false; invalid input throws ConfigError, other failures throw Error.
RunResult run(const ExperimentConfig& cfg);

/// 0 if pass, 1 on tolerance failure.
inline int exit_code(const RunResult& r) { return r.pass ? 0 : 1; }

}  // namespace modelset
