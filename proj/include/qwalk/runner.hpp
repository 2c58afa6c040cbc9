#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "json.hpp"

#include "qwalk/config.hpp"
#include "qwalk/ensembles.hpp"
#include "qwalk/optimizer.hpp"

namespace qwalk {

/// QWALK_OUT_DIR when set and non-empty, otherwise "qwalk-out".
std::filesystem::path default_out_dir();

struct RunOptions {
  std::filesystem::path out_dir;  // empty: config.out_dir, then default_out_dir()
  int threads = 0;
  std::function<void(const std::string&)> log;
};

struct OutputEntry {
  std::string scenario;
  std::string walk;
  std::string kind;  // "series" or "distribution"
  std::string path;  // relative to the run directory
};

struct ScenarioResult {
  std::string name;
  EnsembleResult ensemble;
};

struct RunResult {
  std::filesystem::path directory;  // <out_dir>/<config name>
  nlohmann::json manifest;
  std::vector<OutputEntry> files;
  std::vector<ScenarioResult> scenarios;
};

/// Simulates every scenario and writes series, distributions and
/// manifest.json under <out_dir>/<config name>.
RunResult run_experiment(const RunConfig& config, const RunOptions& options = {});

/// Runs the config's optimizer section; writes optimization.{csv,json} and
/// manifest.json.
struct OptimizeResult {
  std::filesystem::path directory;
  nlohmann::json manifest;
  OptimizationReport report;
};

OptimizeResult run_optimization(const RunConfig& config, const RunOptions& options = {});

}  // namespace qwalk
