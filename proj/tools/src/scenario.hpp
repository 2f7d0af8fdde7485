#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "opoqed/params.hpp"
#include "opoqed/spectra.hpp"

namespace opoqed::cli {

enum class Task { transmitted, fluorescent, squeezing, scaling, trajectory, conditioned, validate };
const char* to_string(Task t);
std::optional<Task> parse_task(const std::string& s);

/// Bad user input. Maps to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ScenarioConfig {
  std::string preset;  // empty for a custom run
  std::string note;
  Task task = Task::transmitted;
  SpectrumChannel channel = SpectrumChannel::transmitted;
  SystemParams params;
  bool n_max_explicit = false;

  std::optional<double> omega_max;
  std::optional<int> omega_points;

  std::vector<double> drives;  // scaling grid; empty: 1e-4..1e-2 times gamma

  std::size_t n_traj = 1;
  double t_max = 1.0;
  double sample_dt = 0.01;
  std::uint64_t seed = 1;
  double t_post = 0.5;

  bool gnuplot = false;
  double inject_regression_fault = 0.0;  // validation test hook

  /// Resolved frequency grid (preset defaults, overrides, resolution check).
  [[nodiscard]] FrequencyGrid grid() const;
  [[nodiscard]] std::vector<double> scaling_drives() const;
  /// Throws ConfigError for values no task can use.
  void check() const;
};

struct Preset {
  std::string name;
  Task task;
  double g, kappa, F;
  std::string caption;
  std::string note;  // prose/caption conflicts
};

const std::vector<Preset>& presets();
const Preset& find_preset(const std::string& name);  // ConfigError if unknown
ScenarioConfig config_from_preset(const std::string& name);

/// Applies a flat JSON object on top of `base`. Unknown keys and wrongly typed
/// values raise ConfigError.
ScenarioConfig apply_json(ScenarioConfig base, const std::string& json_text);

/// Echo of every resolved field, used in manifest.json.
std::string config_to_json(const ScenarioConfig& config);

struct RunResult {
  int exit_code = 0;
  std::string message;                        // one-line diagnostic
  std::map<std::string, std::string> files;  // name -> contents, written by the caller
  std::vector<std::string> warnings;
  std::string summary_json;                   // task-specific results for the manifest
};

/// Runs the task entirely in memory; numerical failures become exit 3.
RunResult run_scenario(const ScenarioConfig& config);

/// Writes files plus manifest.json into `out_dir` (created if needed).
void write_outputs(const std::string& out_dir, const ScenarioConfig& config, const RunResult& result,
                   double wall_seconds);

std::string presets_table();

}  // namespace opoqed::cli
