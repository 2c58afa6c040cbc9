#include "qwalk/optimizer.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <set>
#include <thread>

namespace qwalk {

namespace {

double wrap_degrees(double x) {
  x = std::fmod(x, 360.0);
  if (x < 0) x += 360.0;
  x = std::round(x * 1e9) / 1e9;
  if (x >= 360.0) x -= 360.0;
  return x;
}

using PointKey = std::pair<long long, long long>;

PointKey key_of(double gamma_deg, double chi_deg) {
  return {std::llround(gamma_deg * 1e6), std::llround(chi_deg * 1e6)};
}

std::vector<Candidate> evaluate_points(const std::vector<std::pair<double, double>>& points, const Objective& objective,
                                       int threads) {
  std::vector<Candidate> out(points.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= points.size()) return;
      try {
        out[i] = Candidate{points[i].first, points[i].second, objective(points[i].first, points[i].second)};
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        next.store(points.size());
        return;
      }
    }
  };
  int n = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
  n = std::max(1, std::min<int>(n, static_cast<int>(points.size())));
  if (n == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < n; ++t) pool.emplace_back(worker);
  }
  if (error) std::rethrow_exception(error);
  return out;
}

void rank(std::vector<Candidate>& candidates) {
  std::sort(candidates.begin(), candidates.end(), ranks_before);
}

}  // namespace

void AngleAxis::validate() const {
  if (count < 1) throw InvalidArgument("grid axis needs at least one point");
  if (!std::isfinite(start_deg) || !std::isfinite(step_deg)) throw InvalidArgument("grid axis values must be finite");
  if (count > 1 && !(step_deg > 0)) throw InvalidArgument("grid step must be positive");
}

double AngleAxis::at(int i) const { return wrap_degrees(start_deg + i * step_deg); }

void GridSpec::validate() const {
  gamma.validate();
  chi.validate();
}

const Candidate& OptimizationReport::best() const {
  if (ranking.empty()) throw InvalidArgument("empty optimization report");
  return ranking.front();
}

bool ranks_before(const Candidate& a, const Candidate& b) {
  if (a.eval.feasible != b.eval.feasible) return a.eval.feasible;
  if (a.eval.value != b.eval.value) return a.eval.value > b.eval.value;
  if (a.gamma_deg != b.gamma_deg) return a.gamma_deg < b.gamma_deg;
  return a.chi_deg < b.chi_deg;
}

OptimizationReport grid_search(const GridSpec& grid, const Objective& objective, int threads) {
  grid.validate();
  std::vector<std::pair<double, double>> points;
  points.reserve(grid.size());
  for (int i = 0; i < grid.gamma.count; ++i) {
    for (int j = 0; j < grid.chi.count; ++j) points.emplace_back(grid.gamma.at(i), grid.chi.at(j));
  }
  OptimizationReport report;
  report.ranking = evaluate_points(points, objective, threads);
  rank(report.ranking);
  return report;
}

double objective_abs_time_avg(const std::map<std::string, CoinMatrixd>& coins, const std::vector<std::string>& pattern,
                              const WalkParams& params, int steps) {
  const GameScheduled schedule(coins, pattern);
  const Trajectory traj = evolve(default_ratchet_state<double>(default_half_width(steps)), schedule, params, steps);
  return std::abs(traj.records.back().time_average);
}

std::string_view to_string(ObjectiveMode mode) { return mode == ObjectiveMode::kWalk ? "walk" : "joint"; }

ObjectiveMode parse_objective_mode(std::string_view name) {
  if (name == "walk") return ObjectiveMode::kWalk;
  if (name == "joint") return ObjectiveMode::kJoint;
  throw InvalidArgument("unknown objective mode '" + std::string(name) + "'");
}

std::map<std::string, SignConstraint> parrondo_constraints() {
  return {{"A", SignConstraint::kNegative}, {"B", SignConstraint::kNegative}, {"ABB", SignConstraint::kPositive}};
}

void CoinSearch::validate() const {
  params.validate();
  if (steps < 1) throw InvalidArgument("optimizer horizon must be >= 1");
  if (!coins.contains(free_coin)) throw InvalidArgument("free coin '" + free_coin + "' is not defined");
  if (!std::isfinite(alpha_deg)) throw InvalidArgument("alpha must be finite");
  if (top_k < 1) throw InvalidArgument("top_k must be >= 1");
  grid.validate();
  std::set<std::string> labels;
  for (const auto& [label, pattern] : walks) labels.insert(label);
  auto require = [&](const std::string& label) {
    if (!labels.contains(label)) throw InvalidArgument("optimizer references unknown walk '" + label + "'");
  };
  if (mode == ObjectiveMode::kWalk) require(target);
  if (mode == ObjectiveMode::kJoint) {
    if (joint_targets.empty()) throw InvalidArgument("joint objective needs at least one walk");
    for (const auto& t : joint_targets) require(t);
  }
  for (const auto& [label, sign] : constraints) require(label);
  for (const auto& level : refine) {
    if (!(level.window_deg >= 0) || !(level.step_deg > 0)) throw InvalidArgument("refinement window/step must be positive");
  }
}

namespace {

bool uses_coin(const std::vector<std::string>& pattern, const std::string& coin) {
  return std::find(pattern.begin(), pattern.end(), coin) != pattern.end();
}

std::map<std::string, double> fixed_walk_values(const CoinSearch& search) {
  std::map<std::string, double> values;
  for (const auto& [label, pattern] : search.walks) {
    if (uses_coin(pattern, search.free_coin)) continue;
    const Trajectory traj = evolve(default_ratchet_state<double>(default_half_width(search.steps)),
                                   GameScheduled(search.coins, pattern), search.params, search.steps);
    values[label] = traj.records.back().time_average;
  }
  return values;
}

Evaluation evaluate_with(const CoinSearch& search, const std::map<std::string, double>& fixed, double gamma_deg,
                         double chi_deg) {
  auto coins = search.coins;
  coins.insert_or_assign(search.free_coin, make_coin_degrees(search.alpha_deg, gamma_deg, chi_deg));
  Evaluation eval;
  const int L = default_half_width(search.steps);
  for (const auto& [label, pattern] : search.walks) {
    if (auto it = fixed.find(label); it != fixed.end()) {
      eval.time_averages[label] = it->second;
      continue;
    }
    const Trajectory traj =
        evolve(default_ratchet_state<double>(L), GameScheduled(coins, pattern), search.params, search.steps);
    eval.time_averages[label] = traj.records.back().time_average;
  }
  if (search.mode == ObjectiveMode::kWalk) {
    eval.value = std::abs(eval.time_averages.at(search.target));
  } else {
    eval.value = std::numeric_limits<double>::infinity();
    for (const auto& t : search.joint_targets) eval.value = std::min(eval.value, std::abs(eval.time_averages.at(t)));
  }
  for (const auto& [label, sign] : search.constraints) {
    const double v = eval.time_averages.at(label);
    if (sign == SignConstraint::kNegative && !(v < 0)) eval.violations.push_back(label + " not losing");
    if (sign == SignConstraint::kPositive && !(v > 0)) eval.violations.push_back(label + " not winning");
  }
  eval.feasible = eval.violations.empty();
  return eval;
}

}  // namespace

Evaluation evaluate_coin(const CoinSearch& search, double gamma_deg, double chi_deg) {
  search.validate();
  return evaluate_with(search, fixed_walk_values(search), gamma_deg, chi_deg);
}

OptimizationReport optimize_coins(const CoinSearch& search) {
  search.validate();
  const auto fixed = fixed_walk_values(search);
  const Objective objective = [&](double g, double c) { return evaluate_with(search, fixed, g, c); };

  OptimizationReport report = grid_search(search.grid, objective, search.threads);
  std::set<PointKey> seen;
  for (const auto& c : report.ranking) seen.insert(key_of(c.gamma_deg, c.chi_deg));

  for (const auto& level : search.refine) {
    const int half = static_cast<int>(std::llround(level.window_deg / level.step_deg));
    const std::size_t seeds = std::min<std::size_t>(static_cast<std::size_t>(search.top_k), report.ranking.size());
    std::vector<std::pair<double, double>> points;
    for (std::size_t s = 0; s < seeds; ++s) {
      const Candidate& seed = report.ranking[s];
      for (int i = -half; i <= half; ++i) {
        for (int j = -half; j <= half; ++j) {
          const double g = wrap_degrees(seed.gamma_deg + i * level.step_deg);
          const double c = wrap_degrees(seed.chi_deg + j * level.step_deg);
          if (seen.insert(key_of(g, c)).second) points.emplace_back(g, c);
        }
      }
    }
    auto fresh = evaluate_points(points, objective, search.threads);
    report.ranking.insert(report.ranking.end(), std::make_move_iterator(fresh.begin()),
                          std::make_move_iterator(fresh.end()));
    rank(report.ranking);
  }
  return report;
}

}  // namespace qwalk
