#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "qwalk/coin.hpp"
#include "qwalk/observables.hpp"
#include "qwalk/params.hpp"
#include "qwalk/philox.hpp"
#include "qwalk/propagation.hpp"

namespace qwalk {

/// Uniform phase noise gamma -> gamma + delta, delta in [-delta_max, delta_max],
/// drawn independently for every step.
struct NoiseSpec {
  double delta_max = 0.0;
  int realizations = 1;
  std::uint64_t seed = 0;

  void validate() const;
  bool operator==(const NoiseSpec&) const = default;
};

/// Gaussian quasimomentum spread, N(0, sigma_beta^2) folded into [0, 1).
struct QuasimomentumSpec {
  double sigma_beta = 0.0;
  int count = 1;
  std::uint64_t seed = 0;

  void validate() const;
  bool operator==(const QuasimomentumSpec&) const = default;
};

/// Stream identity of one noisy trajectory.
struct StreamKey {
  std::uint64_t seed = 0;
  std::uint32_t walk = 0;  // fnv1a32 of the walk label
  std::uint32_t realization = 0;
  std::uint32_t beta_index = 0;
};

/// delta_t for t >= 1, a pure function of (key, t).
class PhaseNoiseStream {
 public:
  PhaseNoiseStream(double delta_max, StreamKey key);

  double delta(int step) const;
  double delta_max() const { return delta_max_; }

 private:
  double delta_max_;
  StreamKey key_;
  Philox4x32 rng_;
};

/// Per-step noisy coins for one walk: step t yields
/// make_coin(alpha, gamma + delta_t, chi) where the base coin is schedule[t].
class NoisyCoinStream {
 public:
  NoisyCoinStream(const GameScheduled& schedule, PhaseNoiseStream noise);

  CoinMatrixd operator()(int step) const;
  double delta(int step) const { return noise_.delta(step); }

 private:
  const GameScheduled* schedule_;
  PhaseNoiseStream noise_;
};

NoisyCoinStream noisy_coin_stream(const GameScheduled& schedule, const NoiseSpec& spec, const std::string& walk_label,
                                  int realization, int beta_index = 0);

std::vector<double> sample_quasimomenta(const QuasimomentumSpec& spec);

/// A labelled walk: e.g. {"ABB", schedule with pattern [A, B, B]}.
struct NamedSchedule {
  std::string label;
  GameScheduled schedule;
};

enum class InitialState { kRatchet, kSingleMomentum };

struct EnsembleOptions {
  int threads = 0;      // 0: hardware concurrency
  int half_width = 0;   // 0: default_half_width(steps)
  InitialState initial_state = InitialState::kRatchet;
  bool keep_final_distributions = false;
  /// Trajectories per reduction block; sums run in fixed block order.
  int block_size = 32;
};

struct WalkEnsemble {
  std::string label;
  std::vector<double> mean_winning;       // <O(t)>, t = 0..N
  std::vector<double> mean_time_average;  // <Obar(t)>
  MomentumDistributiond mean_final_distribution;
  std::vector<double> final_winning;       // per trajectory, index r * count + q
  std::vector<double> final_time_average;  // per trajectory
  std::vector<MomentumDistributiond> final_distributions;  // when requested
};

struct EnsembleResult {
  std::vector<WalkEnsemble> walks;
  WalkParams params;
  NoiseSpec noise;
  QuasimomentumSpec quasimomentum;
  std::vector<double> betas;
  int steps = 0;
  int half_width = 0;

  const WalkEnsemble& walk(const std::string& label) const;
};

/// Evolves every walk for every (realization r, quasimomentum q) pair and
/// averages O(t), Obar(t) and the final P(n) uniformly over the pairs.
EnsembleResult run_ensemble(const std::vector<NamedSchedule>& walks, const WalkParams& params, const NoiseSpec& noise,
                            const QuasimomentumSpec& qm, int steps, const EnsembleOptions& options = {});

/// Initial state used by run_ensemble and the experiment runner.
WalkStated make_initial_state(InitialState kind, int half_width);

}  // namespace qwalk
