#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "qwalk/coin.hpp"
#include "qwalk/ensembles.hpp"
#include "qwalk/params.hpp"

namespace qwalk {

/// Angles start + i * step for i < count, wrapped into [0, 360) degrees.
struct AngleAxis {
  double start_deg = 0.0;
  double step_deg = 1.0;
  int count = 360;

  void validate() const;
  double at(int i) const;
  bool operator==(const AngleAxis&) const = default;
};

/// (gamma, chi) grid in degrees; alpha is held fixed by the caller.
struct GridSpec {
  AngleAxis gamma;
  AngleAxis chi;

  void validate() const;
  std::size_t size() const { return static_cast<std::size_t>(gamma.count) * static_cast<std::size_t>(chi.count); }
};

struct Evaluation {
  double value = 0.0;
  bool feasible = true;
  std::map<std::string, double> time_averages;  // Obar(N) per walk label
  std::vector<std::string> violations;
};

struct Candidate {
  double gamma_deg = 0.0;
  double chi_deg = 0.0;
  Evaluation eval;
};

/// Ranking: feasible before infeasible, then value descending, then
/// (gamma, chi) ascending.
struct OptimizationReport {
  std::vector<Candidate> ranking;

  bool has_feasible() const { return !ranking.empty() && ranking.front().eval.feasible; }
  /// Top entry; infeasible only when no candidate is feasible.
  const Candidate& best() const;
};

using Objective = std::function<Evaluation(double gamma_deg, double chi_deg)>;

bool ranks_before(const Candidate& a, const Candidate& b);

/// Evaluates every grid point (in parallel when threads != 1) and ranks them.
OptimizationReport grid_search(const GridSpec& grid, const Objective& objective, int threads = 0);

/// |Obar(N)| of the walk driven by `pattern` from the default ratchet state.
double objective_abs_time_avg(const std::map<std::string, CoinMatrixd>& coins, const std::vector<std::string>& pattern,
                              const WalkParams& params, int steps);

enum class ObjectiveMode {
  kWalk,   // |Obar(N)| of the target walk
  kJoint,  // min(|Obar_A(N)|, |Obar_ABB(N)|) over the joint walks
};

std::string_view to_string(ObjectiveMode mode);
ObjectiveMode parse_objective_mode(std::string_view name);

enum class SignConstraint { kNegative, kPositive };

struct RefineLevel {
  double window_deg = 1.0;  // half-width of the window around each seed point
  double step_deg = 0.1;
  bool operator==(const RefineLevel&) const = default;
};

/// Coin search: one coin (free_coin) varies over (gamma, chi) at fixed
/// alpha, every other coin stays as given.
struct CoinSearch {
  WalkParams params;
  int steps = 50;
  std::map<std::string, CoinMatrixd> coins;
  std::vector<std::pair<std::string, std::vector<std::string>>> walks;  // label, pattern
  std::string free_coin = "A";
  double alpha_deg = 0.0;
  ObjectiveMode mode = ObjectiveMode::kWalk;
  std::string target = "A";
  std::vector<std::string> joint_targets = {"A", "ABB"};
  std::map<std::string, SignConstraint> constraints;  // Parrondo: A, B negative; ABB positive
  GridSpec grid;
  std::vector<RefineLevel> refine;
  int top_k = 5;
  int threads = 0;

  void validate() const;
};

/// Constraint set Obar_A < 0, Obar_B < 0, Obar_ABB > 0.
std::map<std::string, SignConstraint> parrondo_constraints();

/// Evaluates one (gamma, chi) point of a coin search.
Evaluation evaluate_coin(const CoinSearch& search, double gamma_deg, double chi_deg);

/// Coarse grid followed by each refinement level around the current top_k
/// candidates. The report holds every distinct point evaluated.
OptimizationReport optimize_coins(const CoinSearch& search);

}  // namespace qwalk
