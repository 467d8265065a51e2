#pragma once

// Experiment runner behind the command-line tool: a configuration (JSON, or
// one of the built-in presets) selects a pipeline, the run writes its tables,
// curves and meshes into a run directory together with manifest.json.

#include "cmc/shooting.hpp"

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace cmc {

enum class Pipeline { Solve, SweepFamily, ImmersedSearch, VerifyFlux, ExportMesh };

[[nodiscard]] const char* pipeline_name(Pipeline p);

struct ExperimentConfig {
  std::string name = "run";
  Pipeline pipeline = Pipeline::Solve;
  std::string space = "sol";  // "sol" or "ekt"
  std::string axis = "base";  // Sol only: "base", "diag+", "diag-"
  double kappa = -1.0;
  double tau = 0.0;
  double H = 1.0;
  std::optional<double> a;  // solve: integrate this seed instead of searching
  std::optional<std::pair<double, double>> bracket;
  std::vector<double> H_list;
  std::vector<double> H_root_factors;  // verify: H = factor * sqrt(-kappa)
  std::vector<double> kappa_list;
  std::vector<double> tau_list;
  int turn = 9;
  std::string aim = "y-axis";  // or "diag-minus"
  std::optional<double> H_goal;
  double s_min = -2.0;
  double s_max = 2.0;
  int rings = 41;
  int panels = 1;
  std::vector<std::string> formats{"csv", "svg"};
  bool parallel = true;
  int seed = 0;  // recorded only; every pipeline is deterministic
  IntegrationOptions integration;
  RootOptions root;
  ContinuationOptions continuation;

  [[nodiscard]] AxisSpec axis_spec() const;
  [[nodiscard]] bool wants(const std::string& format) const;
};

/// Throws ConfigError on empty input, unknown keys or wrong types.
[[nodiscard]] ExperimentConfig parse_config(const nlohmann::json& j);
[[nodiscard]] ExperimentConfig load_config(const std::filesystem::path& path);
[[nodiscard]] nlohmann::json to_json(const ExperimentConfig& c);

[[nodiscard]] std::vector<std::string> preset_names();
/// Throws ConfigError for an unknown name.
[[nodiscard]] nlohmann::json preset_json(const std::string& name);
[[nodiscard]] ExperimentConfig preset(const std::string& name);

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int solver = 1;
inline constexpr int config = 2;
inline constexpr int bracket = 3;
}  // namespace exit_code

/// Maps the error hierarchy to the process exit codes.
[[nodiscard]] int exit_code_for(const std::exception& e);

/// $CMC_OUT_DIR when set, else ./runs.
[[nodiscard]] std::filesystem::path default_out_dir();

struct RunResult {
  int exit_code = exit_code::ok;
  std::filesystem::path dir;
  nlohmann::json results;
  std::string message;
  std::vector<std::string> files;
};

/// Runs the pipeline into out_root/<name>. Never throws for solver, bracket
/// or configuration failures; those are reported through exit_code and the
/// manifest.
[[nodiscard]] RunResult run_experiment(const ExperimentConfig& config, const std::filesystem::path& out_root);

}  // namespace cmc
