#include "qwalk/config.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <set>
#include <sstream>

#include "qwalk/presets.hpp"

namespace qwalk {

using nlohmann::json;

std::string_view to_string(ConfigErrorKind kind) {
  switch (kind) {
    case ConfigErrorKind::kUnknownPreset: return "unknown-preset";
    case ConfigErrorKind::kMalformed: return "malformed-config";
    case ConfigErrorKind::kOutOfRange: return "out-of-range";
    case ConfigErrorKind::kUnknownField: return "unknown-field";
  }
  return "config-error";
}

std::string_view to_string(OutputFormat format) { return format == OutputFormat::kCsv ? "csv" : "json"; }

OutputFormat parse_format(std::string_view name) {
  if (name == "csv") return OutputFormat::kCsv;
  if (name == "json") return OutputFormat::kJson;
  throw ConfigError(ConfigErrorKind::kOutOfRange, "unknown output format '" + std::string(name) + "' (csv, json)");
}

WalkParams Scenario::walk_params() const {
  WalkParams p;
  p.k = k;
  p.tau = tau_over_pi * std::numbers::pi;
  p.beta = beta;
  p.propagator = propagator;
  p.light_shift = light_shift;
  p.leak_tolerance = leak_tolerance;
  return p;
}

std::vector<NamedSchedule> Scenario::schedules() const {
  std::map<std::string, CoinMatrixd> matrices;
  for (const auto& [label, c] : coins) matrices.emplace(label, c.matrix());
  std::vector<NamedSchedule> out;
  for (const auto& w : walks) out.push_back({w.label, GameScheduled(matrices, w.pattern)});
  return out;
}

NoiseSpec Scenario::noise(std::uint64_t seed) const {
  return NoiseSpec{deg_to_rad(noise_deg), realizations, seed};
}

QuasimomentumSpec Scenario::quasimomentum(std::uint64_t seed) const {
  return QuasimomentumSpec{sigma_beta, beta_samples, seed};
}

namespace {

[[noreturn]] void out_of_range(const std::string& where, const std::string& what) {
  throw ConfigError(ConfigErrorKind::kOutOfRange, where + ": " + what);
}

bool file_safe(const std::string& s) {
  if (s.empty() || s == "." || s == "..") return false;
  for (char c : s) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_' ||
                    c == '-' || c == '.';
    if (!ok) return false;
  }
  return true;
}

std::string_view to_string(InitialState s) { return s == InitialState::kRatchet ? "ratchet" : "single-momentum"; }

std::string_view to_string(SignConstraint s) { return s == SignConstraint::kNegative ? "negative" : "positive"; }

// Reads one JSON object, tracking which keys were consumed so that leftovers
// can be reported as unknown fields.
class Reader {
 public:
  Reader(const json& j, std::string where) : j_(j), where_(std::move(where)) {
    if (!j_.is_object()) malformed("expected an object");
  }

  bool has(const char* key) const { return j_.contains(key); }

  const json* raw(const char* key) {
    seen_.insert(key);
    auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  double number(const char* key, double fallback) {
    const json* v = raw(key);
    if (!v) return fallback;
    if (!v->is_number()) malformed(std::string(key) + " must be a number");
    return v->get<double>();
  }

  int integer(const char* key, int fallback) {
    const json* v = raw(key);
    if (!v) return fallback;
    if (!v->is_number_integer()) malformed(std::string(key) + " must be an integer");
    const auto x = v->get<std::int64_t>();
    if (x < std::numeric_limits<int>::min() || x > std::numeric_limits<int>::max()) {
      out_of_range(where_, std::string(key) + " does not fit in an int");
    }
    return static_cast<int>(x);
  }

  std::uint64_t unsigned64(const char* key, std::uint64_t fallback) {
    const json* v = raw(key);
    if (!v) return fallback;
    if (v->is_number_unsigned()) return v->get<std::uint64_t>();
    if (v->is_number_integer()) out_of_range(where_, std::string(key) + " must be >= 0");
    malformed(std::string(key) + " must be a non-negative integer");
  }

  std::string string(const char* key, std::string fallback) {
    const json* v = raw(key);
    if (!v) return fallback;
    if (!v->is_string()) malformed(std::string(key) + " must be a string");
    return v->get<std::string>();
  }

  bool boolean(const char* key, bool fallback) {
    const json* v = raw(key);
    if (!v) return fallback;
    if (!v->is_boolean()) malformed(std::string(key) + " must be true or false");
    return v->get<bool>();
  }

  std::vector<std::string> strings(const char* key, std::vector<std::string> fallback) {
    const json* v = raw(key);
    if (!v) return fallback;
    if (!v->is_array()) malformed(std::string(key) + " must be an array of strings");
    std::vector<std::string> out;
    for (const auto& e : *v) {
      if (!e.is_string()) malformed(std::string(key) + " must be an array of strings");
      out.push_back(e.get<std::string>());
    }
    return out;
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!seen_.contains(it.key())) {
        throw ConfigError(ConfigErrorKind::kUnknownField, where_ + ": unknown field '" + it.key() + "'");
      }
    }
  }

  [[noreturn]] void malformed(const std::string& what) const {
    throw ConfigError(ConfigErrorKind::kMalformed, where_ + ": " + what);
  }

  const std::string& where() const { return where_; }

 private:
  const json& j_;
  std::string where_;
  std::set<std::string> seen_;
};

CoinDegrees coin_from_json(const json& j, const std::string& where) {
  Reader r(j, where);
  CoinDegrees c;
  c.alpha_deg = r.number("alpha_deg", 0.0);
  c.gamma_deg = r.number("gamma_deg", 0.0);
  c.chi_deg = r.number("chi_deg", 0.0);
  r.finish();
  return c;
}

AngleAxis axis_from_json(const json& j, const std::string& where, AngleAxis fallback) {
  Reader r(j, where);
  AngleAxis a;
  a.start_deg = r.number("start_deg", fallback.start_deg);
  a.step_deg = r.number("step_deg", fallback.step_deg);
  a.count = r.integer("count", fallback.count);
  r.finish();
  return a;
}

json axis_to_json(const AngleAxis& a) {
  return {{"start_deg", a.start_deg}, {"step_deg", a.step_deg}, {"count", a.count}};
}

Scenario scenario_from_json(const json& j, const std::string& where) {
  Reader r(j, where);
  Scenario s;
  s.name = r.string("name", "");
  s.k = r.number("k", s.k);
  s.tau_over_pi = r.number("tau_over_pi", s.tau_over_pi);
  s.beta = r.number("beta", s.beta);
  const std::string prop = r.string("propagator", std::string(to_string(s.propagator)));
  if (prop == "ideal") {
    s.propagator = PropagatorKind::kIdeal;
  } else if (prop == "kicked-rotor") {
    s.propagator = PropagatorKind::kKickedRotor;
  } else {
    out_of_range(where, "propagator must be 'ideal' or 'kicked-rotor', got '" + prop + "'");
  }
  s.light_shift = r.boolean("light_shift", s.light_shift);
  if (const json* v = r.raw("leak_tolerance")) {
    if (v->is_null()) {
      s.leak_tolerance = std::numeric_limits<double>::infinity();
    } else if (v->is_number()) {
      s.leak_tolerance = v->get<double>();
    } else {
      r.malformed("leak_tolerance must be a number or null");
    }
  }
  if (const json* v = r.raw("coins")) {
    if (!v->is_object()) r.malformed("coins must be an object of label -> angles");
    for (auto it = v->begin(); it != v->end(); ++it) {
      s.coins.emplace(it.key(), coin_from_json(it.value(), where + ".coins." + it.key()));
    }
  }
  if (const json* v = r.raw("walks")) {
    if (!v->is_array()) r.malformed("walks must be an array");
    for (std::size_t i = 0; i < v->size(); ++i) {
      Reader w((*v)[i], where + ".walks[" + std::to_string(i) + "]");
      WalkSpec spec;
      spec.label = w.string("label", "");
      spec.pattern = w.strings("pattern", {});
      w.finish();
      s.walks.push_back(std::move(spec));
    }
  }
  const std::string init = r.string("initial_state", std::string(to_string(s.initial_state)));
  if (init == "ratchet") {
    s.initial_state = InitialState::kRatchet;
  } else if (init == "single-momentum") {
    s.initial_state = InitialState::kSingleMomentum;
  } else {
    out_of_range(where, "initial_state must be 'ratchet' or 'single-momentum', got '" + init + "'");
  }
  s.noise_deg = r.number("noise_deg", s.noise_deg);
  s.realizations = r.integer("realizations", s.realizations);
  s.sigma_beta = r.number("sigma_beta", s.sigma_beta);
  s.beta_samples = r.integer("beta_samples", s.beta_samples);
  s.half_width = r.integer("half_width", s.half_width);
  r.finish();
  return s;
}

json scenario_to_json(const Scenario& s) {
  json coins = json::object();
  for (const auto& [label, c] : s.coins) {
    coins[label] = {{"alpha_deg", c.alpha_deg}, {"gamma_deg", c.gamma_deg}, {"chi_deg", c.chi_deg}};
  }
  json walks = json::array();
  for (const auto& w : s.walks) walks.push_back({{"label", w.label}, {"pattern", w.pattern}});
  json j = {
      {"name", s.name},
      {"k", s.k},
      {"tau_over_pi", s.tau_over_pi},
      {"beta", s.beta},
      {"propagator", to_string(s.propagator)},
      {"light_shift", s.light_shift},
      {"coins", coins},
      {"walks", walks},
      {"initial_state", to_string(s.initial_state)},
      {"noise_deg", s.noise_deg},
      {"realizations", s.realizations},
      {"sigma_beta", s.sigma_beta},
      {"beta_samples", s.beta_samples},
      {"half_width", s.half_width},
  };
  j["leak_tolerance"] = std::isinf(s.leak_tolerance) ? json(nullptr) : json(s.leak_tolerance);
  return j;
}

OptimizerConfig optimizer_from_json(const json& j, const std::string& where) {
  Reader r(j, where);
  OptimizerConfig o;
  o.free_coin = r.string("free_coin", o.free_coin);
  o.alpha_deg = r.number("alpha_deg", o.alpha_deg);
  const std::string mode = r.string("objective", std::string(to_string(o.mode)));
  if (mode == "walk") {
    o.mode = ObjectiveMode::kWalk;
  } else if (mode == "joint") {
    o.mode = ObjectiveMode::kJoint;
  } else {
    out_of_range(where, "objective must be 'walk' or 'joint', got '" + mode + "'");
  }
  o.target = r.string("target", o.target);
  o.joint_targets = r.strings("joint_targets", o.joint_targets);
  if (const json* v = r.raw("constraints")) {
    if (!v->is_object()) r.malformed("constraints must be an object of walk -> 'negative'|'positive'");
    o.constraints.clear();
    for (auto it = v->begin(); it != v->end(); ++it) {
      if (!it.value().is_string()) r.malformed("constraint for '" + it.key() + "' must be a string");
      const auto sign = it.value().get<std::string>();
      if (sign == "negative") {
        o.constraints[it.key()] = SignConstraint::kNegative;
      } else if (sign == "positive") {
        o.constraints[it.key()] = SignConstraint::kPositive;
      } else {
        out_of_range(where, "constraint must be 'negative' or 'positive', got '" + sign + "'");
      }
    }
  }
  if (const json* v = r.raw("gamma")) o.gamma = axis_from_json(*v, where + ".gamma", o.gamma);
  if (const json* v = r.raw("chi")) o.chi = axis_from_json(*v, where + ".chi", o.chi);
  if (const json* v = r.raw("refine")) {
    if (!v->is_array()) r.malformed("refine must be an array");
    o.refine.clear();
    for (std::size_t i = 0; i < v->size(); ++i) {
      Reader lr((*v)[i], where + ".refine[" + std::to_string(i) + "]");
      RefineLevel level;
      level.window_deg = lr.number("window_deg", level.window_deg);
      level.step_deg = lr.number("step_deg", level.step_deg);
      lr.finish();
      o.refine.push_back(level);
    }
  }
  o.top_k = r.integer("top_k", o.top_k);
  r.finish();
  return o;
}

json optimizer_to_json(const OptimizerConfig& o) {
  json constraints = json::object();
  for (const auto& [label, sign] : o.constraints) constraints[label] = to_string(sign);
  json refine = json::array();
  for (const auto& l : o.refine) refine.push_back({{"window_deg", l.window_deg}, {"step_deg", l.step_deg}});
  return {
      {"free_coin", o.free_coin},
      {"alpha_deg", o.alpha_deg},
      {"objective", to_string(o.mode)},
      {"target", o.target},
      {"joint_targets", o.joint_targets},
      {"constraints", constraints},
      {"gamma", axis_to_json(o.gamma)},
      {"chi", axis_to_json(o.chi)},
      {"refine", refine},
      {"top_k", o.top_k},
  };
}

void validate_scenario(const Scenario& s, std::uint64_t seed) {
  const std::string where = "scenario '" + s.name + "'";
  if (!file_safe(s.name)) out_of_range(where, "name must be non-empty and use only [A-Za-z0-9_.-]");
  if (!std::isfinite(s.tau_over_pi)) out_of_range(where, "tau_over_pi must be finite");
  if (!(s.noise_deg >= 0) || !std::isfinite(s.noise_deg)) out_of_range(where, "noise_deg must be finite and >= 0");
  if (s.half_width < 0) out_of_range(where, "half_width must be >= 0");
  if (s.walks.empty()) out_of_range(where, "at least one walk is required");
  std::set<std::string> labels;
  for (const auto& w : s.walks) {
    if (!file_safe(w.label)) out_of_range(where, "walk label '" + w.label + "' must use only [A-Za-z0-9_.-]");
    if (!labels.insert(w.label).second) out_of_range(where, "duplicate walk label '" + w.label + "'");
  }
  for (const auto& [label, c] : s.coins) {
    if (!std::isfinite(c.alpha_deg) || !std::isfinite(c.gamma_deg) || !std::isfinite(c.chi_deg)) {
      out_of_range(where, "coin '" + label + "' angles must be finite");
    }
  }
  try {
    s.walk_params().validate();
    s.schedules();
    s.noise(seed).validate();
    s.quasimomentum(seed).validate();
  } catch (const InvalidArgument& e) {
    out_of_range(where, e.what());
  }
}

}  // namespace

void RunConfig::validate() const {
  if (!file_safe(name)) out_of_range("config", "name must be non-empty and use only [A-Za-z0-9_.-]");
  if (steps < 0) out_of_range("config", "steps must be >= 0");
  if (steps > 1000000) out_of_range("config", "steps must be <= 1000000");
  if (scenarios.empty()) out_of_range("config", "at least one scenario is required");
  std::set<std::string> names;
  for (const auto& s : scenarios) {
    validate_scenario(s, seed);
    if (!names.insert(s.name).second) out_of_range("config", "duplicate scenario name '" + s.name + "'");
  }
  if (optimizer) {
    try {
      coin_search().validate();
    } catch (const InvalidArgument& e) {
      out_of_range("optimizer", e.what());
    }
  }
}

CoinSearch RunConfig::coin_search(int threads) const {
  if (!optimizer) throw ConfigError(ConfigErrorKind::kOutOfRange, "config has no optimizer section");
  if (scenarios.empty()) throw ConfigError(ConfigErrorKind::kOutOfRange, "config has no scenario to optimize");
  const Scenario& s = scenarios.front();
  const OptimizerConfig& o = *optimizer;
  CoinSearch search;
  search.params = s.walk_params();
  search.steps = steps;
  for (const auto& [label, c] : s.coins) search.coins.emplace(label, c.matrix());
  for (const auto& w : s.walks) search.walks.emplace_back(w.label, w.pattern);
  search.free_coin = o.free_coin;
  search.alpha_deg = o.alpha_deg;
  search.mode = o.mode;
  search.target = o.target;
  search.joint_targets = o.joint_targets;
  search.constraints = o.constraints;
  search.grid = GridSpec{o.gamma, o.chi};
  search.refine = o.refine;
  search.top_k = o.top_k;
  search.threads = threads;
  return search;
}

json to_json(const RunConfig& c) {
  json scenarios = json::array();
  for (const auto& s : c.scenarios) scenarios.push_back(scenario_to_json(s));
  json j = {
      {"name", c.name},
      {"preset", c.preset},
      {"description", c.description},
      {"seed", c.seed},
      {"steps", c.steps},
      {"out_dir", c.out_dir},
      {"format", to_string(c.format)},
      {"scenarios", scenarios},
  };
  if (c.optimizer) j["optimizer"] = optimizer_to_json(*c.optimizer);
  return j;
}

RunConfig config_from_json(const json& j) {
  Reader r(j, "config");
  RunConfig c;
  c.name = r.string("name", c.name);
  c.preset = r.string("preset", "");
  c.description = r.string("description", "");
  c.seed = r.unsigned64("seed", c.seed);
  c.steps = r.integer("steps", c.steps);
  c.out_dir = r.string("out_dir", "");
  c.format = parse_format(r.string("format", "csv"));
  if (const json* v = r.raw("scenarios")) {
    if (!v->is_array()) r.malformed("scenarios must be an array");
    for (std::size_t i = 0; i < v->size(); ++i) {
      c.scenarios.push_back(scenario_from_json((*v)[i], "scenarios[" + std::to_string(i) + "]"));
    }
  }
  if (const json* v = r.raw("optimizer")) c.optimizer = optimizer_from_json(*v, "optimizer");
  r.finish();
  c.validate();
  return c;
}

RunConfig parse_config(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(ConfigErrorKind::kMalformed, std::string("invalid JSON: ") + e.what());
  }
  // A run manifest carries the config it was produced from.
  if (j.is_object() && j.contains("qwalk_manifest")) {
    if (!j.contains("config")) throw ConfigError(ConfigErrorKind::kMalformed, "manifest without a config section");
    return config_from_json(j.at("config"));
  }
  return config_from_json(j);
}

RunConfig load_config(const std::string& preset_or_path) {
  if (is_preset(preset_or_path)) return make_preset(preset_or_path);
  std::ifstream in(preset_or_path);
  if (!in) {
    throw ConfigError(ConfigErrorKind::kUnknownPreset,
                      "'" + preset_or_path + "' is neither a known preset nor a readable config file");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_config(buf.str());
  } catch (const ConfigError& e) {
    throw ConfigError(e.kind(), preset_or_path + ": " + e.what());
  }
}

}  // namespace qwalk
