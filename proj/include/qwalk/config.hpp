#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "qwalk/coin.hpp"
#include "qwalk/ensembles.hpp"
#include "qwalk/optimizer.hpp"
#include "qwalk/params.hpp"

namespace qwalk {

enum class ConfigErrorKind { kUnknownPreset, kMalformed, kOutOfRange, kUnknownField };

std::string_view to_string(ConfigErrorKind kind);

class ConfigError : public std::runtime_error {
 public:
  ConfigError(ConfigErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}
  ConfigErrorKind kind() const { return kind_; }

 private:
  ConfigErrorKind kind_;
};

enum class OutputFormat { kCsv, kJson };

std::string_view to_string(OutputFormat format);
OutputFormat parse_format(std::string_view name);

/// Coin angles as written in configs, in degrees.
struct CoinDegrees {
  double alpha_deg = 0.0;
  double gamma_deg = 0.0;
  double chi_deg = 0.0;

  CoinMatrixd matrix() const { return make_coin_degrees(alpha_deg, gamma_deg, chi_deg); }
  bool operator==(const CoinDegrees&) const = default;
};

struct WalkSpec {
  std::string label;
  std::vector<std::string> pattern;
  bool operator==(const WalkSpec&) const = default;
};

/// One simulation: physics, coins, walks and ensemble sizes.
struct Scenario {
  std::string name;
  double k = 1.56;
  double tau_over_pi = 4.0;
  double beta = 0.0;
  PropagatorKind propagator = PropagatorKind::kKickedRotor;
  bool light_shift = false;
  double leak_tolerance = 1e-10;  // infinity disables the boundary guard
  std::map<std::string, CoinDegrees> coins;
  std::vector<WalkSpec> walks;
  InitialState initial_state = InitialState::kRatchet;
  double noise_deg = 0.0;  // half-width of the uniform gamma noise
  int realizations = 1;
  double sigma_beta = 0.0;
  int beta_samples = 1;
  int half_width = 0;  // 0: sized from the step count

  WalkParams walk_params() const;
  std::vector<NamedSchedule> schedules() const;
  NoiseSpec noise(std::uint64_t seed) const;
  QuasimomentumSpec quasimomentum(std::uint64_t seed) const;
  bool operator==(const Scenario&) const = default;
};

struct OptimizerConfig {
  std::string free_coin = "A";
  double alpha_deg = 0.0;
  ObjectiveMode mode = ObjectiveMode::kWalk;
  std::string target = "A";
  std::vector<std::string> joint_targets = {"A", "ABB"};
  std::map<std::string, SignConstraint> constraints = parrondo_constraints();
  AngleAxis gamma{0.0, 1.0, 360};
  AngleAxis chi{0.0, 1.0, 360};
  std::vector<RefineLevel> refine = {{1.0, 0.1}, {0.1, 0.01}};
  int top_k = 5;
  bool operator==(const OptimizerConfig&) const = default;
};

struct RunConfig {
  std::string name = "run";
  std::string preset;  // empty unless built from a preset
  std::string description;
  std::uint64_t seed = 1;
  int steps = 50;
  std::string out_dir;  // empty: CLI flag, environment or default
  OutputFormat format = OutputFormat::kCsv;
  std::vector<Scenario> scenarios;
  std::optional<OptimizerConfig> optimizer;

  /// Throws ConfigError(kOutOfRange) on invalid values.
  void validate() const;
  /// Coin search over the first scenario; requires `optimizer`.
  CoinSearch coin_search(int threads = 0) const;
  bool operator==(const RunConfig&) const = default;
};

nlohmann::json to_json(const RunConfig& config);
/// Strict: unknown fields, wrong types and invalid values are rejected.
RunConfig config_from_json(const nlohmann::json& j);
RunConfig parse_config(std::string_view text);

/// Preset name, config file, or a manifest written by a previous run.
RunConfig load_config(const std::string& preset_or_path);

}  // namespace qwalk
