#include "qwalk/ensembles.hpp"

#include <atomic>
#include <exception>
#include <cmath>
#include <mutex>
#include <numbers>
#include <optional>
#include <thread>

namespace qwalk {

namespace {

constexpr std::uint32_t kQuasimomentumStream = fnv1a32("quasimomentum");

}  // namespace

void NoiseSpec::validate() const {
  if (!(delta_max >= 0) || !std::isfinite(delta_max)) throw InvalidArgument("noise half-width must be finite and >= 0");
  if (realizations < 1) throw InvalidArgument("realization count must be >= 1");
}

void QuasimomentumSpec::validate() const {
  if (!(sigma_beta >= 0) || !std::isfinite(sigma_beta)) throw InvalidArgument("sigma_beta must be finite and >= 0");
  if (count < 1) throw InvalidArgument("quasimomentum sample count must be >= 1");
}

PhaseNoiseStream::PhaseNoiseStream(double delta_max, StreamKey key)
    : delta_max_(delta_max), key_(key), rng_(key.seed) {}

double PhaseNoiseStream::delta(int step) const {
  if (delta_max_ == 0) return 0.0;
  const auto words = rng_({static_cast<std::uint32_t>(step), key_.realization, key_.beta_index, key_.walk});
  const double u = Philox4x32::to_unit(words[0], words[1]);
  return delta_max_ * (2.0 * u - 1.0);
}

NoisyCoinStream::NoisyCoinStream(const GameScheduled& schedule, PhaseNoiseStream noise)
    : schedule_(&schedule), noise_(noise) {}

CoinMatrixd NoisyCoinStream::operator()(int step) const {
  const CoinMatrixd& base = schedule_->coin_for_step(step);
  if (noise_.delta_max() == 0) return base;
  return base.with_gamma_offset(noise_.delta(step));
}

NoisyCoinStream noisy_coin_stream(const GameScheduled& schedule, const NoiseSpec& spec, const std::string& walk_label,
                                  int realization, int beta_index) {
  spec.validate();
  StreamKey key{spec.seed, fnv1a32(walk_label), static_cast<std::uint32_t>(realization),
                static_cast<std::uint32_t>(beta_index)};
  return NoisyCoinStream(schedule, PhaseNoiseStream(spec.delta_max, key));
}

std::vector<double> sample_quasimomenta(const QuasimomentumSpec& spec) {
  spec.validate();
  std::vector<double> betas(static_cast<std::size_t>(spec.count), 0.0);
  if (spec.sigma_beta == 0) return betas;
  const Philox4x32 rng(spec.seed);
  for (int i = 0; i < spec.count; ++i) {
    const auto w = rng({static_cast<std::uint32_t>(i), 0u, 0u, kQuasimomentumStream});
    const double u1 = 1.0 - Philox4x32::to_unit(w[0], w[1]);  // (0, 1]
    const double u2 = Philox4x32::to_unit(w[2], w[3]);
    const double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    double beta = spec.sigma_beta * z;
    beta -= std::floor(beta);
    if (beta >= 1.0) beta = 0.0;
    betas[static_cast<std::size_t>(i)] = beta;
  }
  return betas;
}

WalkStated make_initial_state(InitialState kind, int half_width) {
  if (kind == InitialState::kSingleMomentum) {
    return single_momentum_state<double>(half_width, 0, balanced_coin<double>());
  }
  return default_ratchet_state<double>(half_width);
}

const WalkEnsemble& EnsembleResult::walk(const std::string& label) const {
  for (const auto& w : walks) {
    if (w.label == label) return w;
  }
  throw InvalidArgument("no walk labelled '" + label + "' in ensemble result");
}

namespace {

struct BlockSums {
  // [walk][t]
  std::vector<std::vector<double>> winning;
  std::vector<std::vector<double>> time_average;
  std::vector<Eigen::ArrayXd> distribution;
};

struct TrajectoryError {
  std::size_t index;
  std::string message;
  std::exception_ptr original;
  bool lattice = false;
};

}  // namespace

EnsembleResult run_ensemble(const std::vector<NamedSchedule>& walks, const WalkParams& params, const NoiseSpec& noise,
                            const QuasimomentumSpec& qm, int steps, const EnsembleOptions& options) {
  params.validate();
  noise.validate();
  qm.validate();
  if (steps < 0) throw InvalidArgument("step count must be >= 0");
  if (walks.empty()) throw InvalidArgument("ensemble needs at least one walk");
  if (options.block_size < 1) throw InvalidArgument("block size must be >= 1");

  EnsembleResult result;
  result.params = params;
  result.noise = noise;
  result.quasimomentum = qm;
  result.steps = steps;
  result.half_width = options.half_width > 0 ? options.half_width : default_half_width(steps);
  result.betas = qm.sigma_beta == 0 ? std::vector<double>(static_cast<std::size_t>(qm.count), params.beta)
                                    : sample_quasimomenta(qm);

  const int L = result.half_width;
  const int lattice = 2 * L + 1;
  const std::size_t n_walks = walks.size();
  const std::size_t n_traj = static_cast<std::size_t>(noise.realizations) * static_cast<std::size_t>(qm.count);
  const std::size_t block = static_cast<std::size_t>(options.block_size);
  const std::size_t n_blocks = (n_traj + block - 1) / block;
  const std::size_t records = static_cast<std::size_t>(steps) + 1;

  std::vector<BlockSums> partial(n_blocks);
  for (std::size_t w = 0; w < n_walks; ++w) {
    WalkEnsemble e;
    e.label = walks[w].label;
    e.final_winning.assign(n_traj, 0.0);
    e.final_time_average.assign(n_traj, 0.0);
    if (options.keep_final_distributions) e.final_distributions.resize(n_traj);
    result.walks.push_back(std::move(e));
  }

  std::atomic<std::size_t> next_block{0};
  std::atomic<bool> failed{false};
  std::mutex error_mutex;
  std::optional<TrajectoryError> first_error;

  auto worker = [&]() {
    std::optional<Propagatord> prop;
    while (!failed.load()) {
      const std::size_t b = next_block.fetch_add(1);
      if (b >= n_blocks) break;
      BlockSums sums;
      sums.winning.assign(n_walks, std::vector<double>(records, 0.0));
      sums.time_average.assign(n_walks, std::vector<double>(records, 0.0));
      sums.distribution.assign(n_walks, Eigen::ArrayXd::Zero(lattice));
      const std::size_t end = std::min(n_traj, (b + 1) * block);
      for (std::size_t i = b * block; i < end; ++i) {
        const int r = static_cast<int>(i / static_cast<std::size_t>(qm.count));
        const int q = static_cast<int>(i % static_cast<std::size_t>(qm.count));
        WalkParams p = params;
        p.beta = result.betas[static_cast<std::size_t>(q)];
        if (!prop) {
          prop.emplace(L, p);
        } else {
          prop->set_quasimomentum(p.beta);
        }
        for (std::size_t w = 0; w < n_walks; ++w) {
          try {
            const NoisyCoinStream coins = noisy_coin_stream(walks[w].schedule, noise, walks[w].label, r, q);
            WalkStated state = make_initial_state(options.initial_state, L);
            const Trajectory traj = evolve_with(state, coins, *prop, steps);
            for (std::size_t t = 0; t < records; ++t) {
              sums.winning[w][t] += traj.records[t].winning;
              sums.time_average[w][t] += traj.records[t].time_average;
            }
            sums.distribution[w] += traj.final_distribution.probabilities();
            auto& e = result.walks[w];
            e.final_winning[i] = traj.records.back().winning;
            e.final_time_average[i] = traj.records.back().time_average;
            if (options.keep_final_distributions) e.final_distributions[i] = traj.final_distribution;
          } catch (const LatticeTooSmall& ex) {
            std::lock_guard<std::mutex> lock(error_mutex);
            const std::string msg = "walk '" + walks[w].label + "', realization " + std::to_string(r) +
                                    ", beta index " + std::to_string(q) + " (beta = " + std::to_string(p.beta) +
                                    "): " + ex.what();
            if (!first_error || i < first_error->index) first_error = TrajectoryError{i, msg, nullptr, true};
            failed.store(true);
            return;
          } catch (...) {
            std::lock_guard<std::mutex> lock(error_mutex);
            if (!first_error || i < first_error->index) first_error = TrajectoryError{i, {}, std::current_exception()};
            failed.store(true);
            return;
          }
        }
      }
      partial[b] = std::move(sums);
    }
  };

  int threads = options.threads > 0 ? options.threads : static_cast<int>(std::thread::hardware_concurrency());
  threads = std::max(1, std::min<int>(threads, static_cast<int>(n_blocks)));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (first_error) {
    if (!first_error->lattice) std::rethrow_exception(first_error->original);
    throw LatticeTooSmall(first_error->message);
  }

  const double inv = 1.0 / static_cast<double>(n_traj);
  for (std::size_t w = 0; w < n_walks; ++w) {
    std::vector<double> o(records, 0.0);
    std::vector<double> oa(records, 0.0);
    Eigen::ArrayXd dist = Eigen::ArrayXd::Zero(lattice);
    for (const auto& s : partial) {
      for (std::size_t t = 0; t < records; ++t) {
        o[t] += s.winning[w][t];
        oa[t] += s.time_average[w][t];
      }
      dist += s.distribution[w];
    }
    for (std::size_t t = 0; t < records; ++t) {
      o[t] *= inv;
      oa[t] *= inv;
    }
    auto& e = result.walks[w];
    e.mean_winning = std::move(o);
    e.mean_time_average = std::move(oa);
    e.mean_final_distribution = MomentumDistributiond(L, dist * inv);
  }
  return result;
}

}  // namespace qwalk
