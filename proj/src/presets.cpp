#include "qwalk/presets.hpp"

#include <functional>

#include "qwalk/emit.hpp"

namespace qwalk {

namespace coins {
// Quoted triples (alpha, chi, gamma) mapped onto CoinDegrees{alpha, gamma, chi}.
CoinDegrees original_a() { return {137.2, 52.1, 29.4}; }
CoinDegrees original_b() { return {149.6, 132.5, 67.4}; }
CoinDegrees zero_alpha_a() { return {0.0, 189.3, 29.4}; }
CoinDegrees zero_alpha_b() { return {0.0, 282.1, 67.4}; }
CoinDegrees shifted_alpha_b() { return {12.4, 269.7, 67.4}; }
CoinDegrees optimized_a() { return {0.0, 246.96, 184.32}; }
}  // namespace coins

namespace {

std::vector<WalkSpec> parrondo_walks() {
  return {{"A", {"A"}}, {"B", {"B"}}, {"ABB", {"A", "B", "B"}}};
}

Scenario parrondo(std::string name, CoinDegrees a, CoinDegrees b) {
  Scenario s;
  s.name = std::move(name);
  s.coins = {{"A", a}, {"B", b}};
  s.walks = parrondo_walks();
  return s;
}

Scenario optimized(std::string name) { return parrondo(std::move(name), coins::optimized_a(), coins::zero_alpha_b()); }

RunConfig base(std::string name, std::string description, int steps = 50) {
  RunConfig c;
  c.name = name;
  c.preset = std::move(name);
  c.description = std::move(description);
  c.steps = steps;
  return c;
}

RunConfig fig1() {
  RunConfig c = base("fig1", "P(n) of walk A after 50 steps, kicked-rotor vs ideal, single-momentum vs ratchet start");
  for (auto prop : {PropagatorKind::kKickedRotor, PropagatorKind::kIdeal}) {
    for (auto init : {InitialState::kSingleMomentum, InitialState::kRatchet}) {
      Scenario s;
      s.name = std::string(prop == PropagatorKind::kIdeal ? "ideal" : "kicked") +
               (init == InitialState::kRatchet ? "_ratchet" : "_single");
      s.propagator = prop;
      s.initial_state = init;
      s.coins = {{"A", coins::original_a()}};
      s.walks = {{"A", {"A"}}};
      c.scenarios.push_back(s);
    }
  }
  return c;
}

RunConfig fig2(char panel) {
  RunConfig c = base(std::string("fig2") + panel, "");
  switch (panel) {
    case 'a':
      c.description = "O(N) of A, B, ABB with the original coins";
      c.scenarios.push_back(parrondo("main", coins::original_a(), coins::original_b()));
      break;
    case 'b':
      c.description = "O(N) with alpha_A = 0 and alpha_B = alpha_B - alpha_A";
      c.scenarios.push_back(parrondo("main", coins::zero_alpha_a(), coins::shifted_alpha_b()));
      break;
    default:
      c.description = "O(N) and Obar(N) with both alphas zero";
      c.scenarios.push_back(parrondo("main", coins::zero_alpha_a(), coins::zero_alpha_b()));
      break;
  }
  return c;
}

RunConfig fig3(char panel) {
  static const std::map<char, std::pair<double, const char*>> kNoise = {
      {'a', {18.0, "pi/10"}}, {'b', {36.0, "pi/5"}}, {'c', {60.0, "pi/3"}}};
  const auto& [deg, label] = kNoise.at(panel);
  RunConfig c = base(std::string("fig3") + panel,
                     std::string("optimized coins, gamma noise in [-") + label + ", " + label + "], R = 50");
  Scenario s = optimized("main");
  s.noise_deg = deg;
  s.realizations = 50;
  c.scenarios.push_back(s);
  return c;
}

Scenario sigma_scenario(const std::string& prefix, double sigma, double noise_deg, int realizations) {
  Scenario s = optimized(prefix + "sigma_beta_" + format_number(sigma));
  s.noise_deg = noise_deg;
  s.realizations = realizations;
  s.sigma_beta = sigma;
  s.beta_samples = 200;
  return s;
}

RunConfig fig4() {
  RunConfig c = base("fig4", "gamma noise pi/3 (R = 50) with sigma_beta 0.005, 0.01, 0.02 over 200 beta values");
  for (double sigma : {0.005, 0.01, 0.02}) c.scenarios.push_back(sigma_scenario("", sigma, 60.0, 50));
  return c;
}

RunConfig fig5() {
  RunConfig c = base("fig5", "P(n) of ABB after 50 steps: resonant and sigma_beta 0.005, 0.01, 0.02, "
                             "without (a) and with (b) gamma noise pi/3");
  auto abb_only = [](Scenario s) {
    s.walks = {{"ABB", {"A", "B", "B"}}};
    return s;
  };
  Scenario resonant = optimized("resonant");
  c.scenarios.push_back(abb_only(resonant));
  for (double sigma : {0.005, 0.01, 0.02}) c.scenarios.push_back(abb_only(sigma_scenario("", sigma, 0.0, 1)));
  Scenario noisy = optimized("noisy_resonant");
  noisy.noise_deg = 60.0;
  noisy.realizations = 50;
  c.scenarios.push_back(abb_only(noisy));
  for (double sigma : {0.005, 0.01, 0.02}) c.scenarios.push_back(abb_only(sigma_scenario("noisy_", sigma, 60.0, 50)));
  return c;
}

RunConfig fig6() {
  RunConfig c = base("fig6", "Obar(N) up to N = 500, gamma noise pi/3, sigma_beta 0.02, 200 beta values, R = 50", 500);
  Scenario s = sigma_scenario("", 0.02, 60.0, 50);
  s.name = "main";
  c.scenarios.push_back(s);
  return c;
}

RunConfig optimize_a() {
  RunConfig c = base("optimize_a", "grid search over (gamma, chi) of coin A at alpha = 0, B fixed at the zero-alpha coin");
  c.scenarios.push_back(parrondo("main", coins::zero_alpha_a(), coins::zero_alpha_b()));
  c.optimizer = OptimizerConfig{};
  return c;
}

struct Entry {
  PresetInfo info;
  std::function<RunConfig()> make;
};

const std::vector<Entry>& registry() {
  static const std::vector<Entry> kEntries = [] {
    std::vector<Entry> e;
    auto add = [&](std::function<RunConfig()> f) {
      RunConfig c = f();
      e.push_back({{c.name, c.description}, std::move(f)});
    };
    add(fig1);
    for (char p : {'a', 'b', 'c'}) add([p] { return fig2(p); });
    for (char p : {'a', 'b', 'c'}) add([p] { return fig3(p); });
    add(fig4);
    add(fig5);
    add(fig6);
    add(optimize_a);
    return e;
  }();
  return kEntries;
}

}  // namespace

const std::vector<PresetInfo>& presets() {
  static const std::vector<PresetInfo> kInfo = [] {
    std::vector<PresetInfo> v;
    for (const auto& e : registry()) v.push_back(e.info);
    return v;
  }();
  return kInfo;
}

bool is_preset(std::string_view name) {
  for (const auto& e : registry()) {
    if (e.info.name == name) return true;
  }
  return false;
}

RunConfig make_preset(std::string_view name) {
  for (const auto& e : registry()) {
    if (e.info.name == name) {
      RunConfig c = e.make();
      c.validate();
      return c;
    }
  }
  throw ConfigError(ConfigErrorKind::kUnknownPreset, "unknown preset '" + std::string(name) + "'");
}

}  // namespace qwalk
