#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qwalk/coin.hpp"
#include "qwalk/errors.hpp"
#include "qwalk/fft_backend.hpp"
#include "qwalk/kick.hpp"
#include "qwalk/observables.hpp"
#include "qwalk/params.hpp"
#include "qwalk/walk_state.hpp"

namespace qwalk {

// Conventions
//   coin |0> carries sigma_z = +1 and is kicked by exp(-i k cos theta);
//   coin |1> is kicked by exp(+i k cos theta).
//   In the ideal walk coin |0> steps to n - 1 and coin |1> to n + 1, which is
//   the direction each component drifts under its kick from the ratchet state.
//   The momentum lattice is a ring of 2L + 1 sites; the boundary guard keeps
//   wrap-around below the leak tolerance.

/// (psi_0n, psi_1n) <- M (psi_0n, psi_1n) at every n.
template <typename Scalar>
void apply_coin(WalkState<Scalar>& state, const CoinMatrix<Scalar>& coin) {
  auto& a = state.amplitudes();
  const auto& m = coin.matrix();
  const Eigen::Array<Complex<Scalar>, 1, Eigen::Dynamic> up = a.row(0);
  a.row(0) = m(0, 0) * up + m(0, 1) * a.row(1);
  a.row(1) = m(1, 0) * up + m(1, 1) * a.row(1);
}

/// Phase exp(-i tau (n + beta)^2 / 2), evaluated in turns with the integer
/// parts removed term by term so resonant parameters give exact unit phases.
template <typename Scalar>
Complex<Scalar> free_phase(int n, Scalar tau, Scalar beta) {
  auto frac = [](Scalar x) { return x - std::floor(x); };
  const Scalar q = tau / (Scalar(4) * std::numbers::pi_v<Scalar>);  // turns per (n + beta)^2
  const Scalar nn = static_cast<Scalar>(n) * static_cast<Scalar>(n);
  const Scalar t1 = (q == std::floor(q)) ? Scalar(0) : frac(q * nn);
  const Scalar t2 = frac(Scalar(2) * q * beta * static_cast<Scalar>(n));
  const Scalar t3 = frac(q * beta * beta);
  const Scalar turns = frac(t1 + t2 + t3);
  if (turns == 0) return Complex<Scalar>(1, 0);
  return std::polar(Scalar(1), -Scalar(2) * std::numbers::pi_v<Scalar> * turns);
}

template <typename Scalar>
void apply_free(WalkState<Scalar>& state, Scalar tau, Scalar beta) {
  auto& a = state.amplitudes();
  for (int n = -state.half_width(); n <= state.half_width(); ++n) {
    const Complex<Scalar> ph = free_phase(n, tau, beta);
    a(0, state.index(n)) *= ph;
    a(1, state.index(n)) *= ph;
  }
}

/// Light shift: coin |0> picks up exp(-i k), coin |1> exp(+i k). A coin with
/// alpha = k undoes it between consecutive kicks.
template <typename Scalar>
void apply_light_shift(WalkState<Scalar>& state, Scalar k) {
  const Complex<Scalar> ph = std::polar(Scalar(1), -k);
  state.amplitudes().row(0) *= ph;
  state.amplitudes().row(1) *= std::conj(ph);
}

/// Coin-conditioned nearest-neighbour shift on the ring.
template <typename Scalar>
void ideal_shift(WalkState<Scalar>& state) {
  auto& a = state.amplitudes();
  const Eigen::Index m = a.cols();
  if (m < 2) return;
  // coin 0: n -> n - 1
  const Complex<Scalar> first = a(0, 0);
  for (Eigen::Index j = 0; j + 1 < m; ++j) a(0, j) = a(0, j + 1);
  a(0, m - 1) = first;
  // coin 1: n -> n + 1
  const Complex<Scalar> last = a(1, m - 1);
  for (Eigen::Index j = m - 1; j > 0; --j) a(1, j) = a(1, j - 1);
  a(1, 0) = last;
}

template <typename Scalar>
void ideal_step(WalkState<Scalar>& state, const CoinMatrix<Scalar>& coin) {
  apply_coin(state, coin);
  ideal_shift(state);
}

/// Kick by circular convolution with the truncated Bessel kernel. Reference
/// path for checking the spectral kick.
template <typename Scalar>
void apply_kick_kernel(WalkState<Scalar>& state, Scalar k) {
  auto& a = state.amplitudes();
  const int m = static_cast<int>(a.cols());
  for (int c = 0; c < 2; ++c) {
    const KickKernel kernel(static_cast<double>(k), c == 0 ? +1 : -1);
    const int band = kernel.bandwidth();
    Eigen::Array<Complex<Scalar>, 1, Eigen::Dynamic> out = Eigen::Array<Complex<Scalar>, 1, Eigen::Dynamic>::Zero(m);
    for (int src = 0; src < m; ++src) {
      const Complex<Scalar> x = a(c, src);
      if (x == Complex<Scalar>(0)) continue;
      for (int dm = -band; dm <= band; ++dm) {
        const int dst = ((src + dm) % m + m) % m;
        out(dst) += static_cast<Complex<Scalar>>(kernel[dm]) * x;
      }
    }
    a.row(c) = out;
  }
}

/// One-step operators for a fixed lattice and parameter set. Holds the FFT
/// plan, the angle-grid kick multipliers and the free-evolution phases, so a
/// long evolution pays for them once.
template <typename Scalar>
class Propagator {
 public:
  Propagator(int half_width, const WalkParams& params)
      : half_width_(half_width), size_(2 * half_width + 1), params_(params) {
    params_.validate();
    const Scalar k = static_cast<Scalar>(params_.k);
    kick_.resize(2, size_);
    for (int j = 0; j < size_; ++j) {
      const Scalar theta = Scalar(2) * std::numbers::pi_v<Scalar> * Scalar(j) / Scalar(size_);
      kick_(0, j) = std::polar(Scalar(1), -k * std::cos(theta));
      kick_(1, j) = std::conj(kick_(0, j));
    }
    set_quasimomentum(params_.beta);
    light_phase_ = std::polar(Scalar(1), -k);
    in_.resize(size_);
    out_.resize(size_);
    // Create the plans up front, serialized.
    std::lock_guard<std::mutex> lock(fft_planner_mutex());
    in_.setZero();
    fft_.inv(out_.data(), in_.data(), size_);
    fft_.fwd(in_.data(), out_.data(), size_);
  }

  Propagator(const Propagator&) = delete;
  Propagator& operator=(const Propagator&) = delete;

  int half_width() const { return half_width_; }
  const WalkParams& params() const { return params_; }

  /// Re-targets the free evolution to another quasimomentum.
  void set_quasimomentum(double beta) {
    params_.beta = beta;
    params_.validate();
    free_.resize(size_);
    free_is_identity_ = true;
    for (int n = -half_width_; n <= half_width_; ++n) {
      free_(n + half_width_) =
          free_phase<Scalar>(n, static_cast<Scalar>(params_.tau), static_cast<Scalar>(params_.beta));
      if (free_(n + half_width_) != Complex<Scalar>(1, 0)) free_is_identity_ = false;
    }
  }

  bool free_is_identity() const { return free_is_identity_; }

  void apply_free(WalkState<Scalar>& state) const {
    check_lattice(state);
    if (free_is_identity_) return;
    state.amplitudes().row(0) *= free_.transpose();
    state.amplitudes().row(1) *= free_.transpose();
  }

  /// exp(-i k sigma_z cos theta) via the angle grid of the 2L+1 ring.
  void apply_kick(WalkState<Scalar>& state) {
    check_lattice(state);
    auto& a = state.amplitudes();
    for (int c = 0; c < 2; ++c) {
      for (int j = 0; j < size_; ++j) in_(j) = a(c, j);
      fft_.inv(out_.data(), in_.data(), size_);
      out_ *= kick_.row(c).transpose();
      fft_.fwd(in_.data(), out_.data(), size_);
      for (int j = 0; j < size_; ++j) a(c, j) = in_(j);
    }
  }

  void apply_light_shift(WalkState<Scalar>& state) const {
    state.amplitudes().row(0) *= light_phase_;
    state.amplitudes().row(1) *= std::conj(light_phase_);
  }

  /// One walk step with the configured propagator, then the boundary guard.
  void step(WalkState<Scalar>& state, const CoinMatrix<Scalar>& coin) {
    check_lattice(state);
    if (params_.propagator == PropagatorKind::kIdeal) {
      ideal_step(state, coin);
    } else {
      apply_coin(state, coin);
      apply_free(state);
      apply_kick(state);
      if (params_.light_shift) apply_light_shift(state);
    }
    state.check_boundary(static_cast<Scalar>(params_.leak_tolerance));
  }

 private:
  void check_lattice(const WalkState<Scalar>& state) const {
    if (state.half_width() != half_width_) {
      throw InvalidArgument("state lattice half-width " + std::to_string(state.half_width()) +
                            " does not match propagator (" + std::to_string(half_width_) + ")");
    }
  }

  int half_width_;
  int size_;
  WalkParams params_;
  Eigen::Array<Complex<Scalar>, 2, Eigen::Dynamic, Eigen::RowMajor> kick_;
  Eigen::Array<Complex<Scalar>, Eigen::Dynamic, 1> free_;
  bool free_is_identity_ = true;
  Complex<Scalar> light_phase_;
  FftEngine<Scalar> fft_;
  Eigen::Array<Complex<Scalar>, Eigen::Dynamic, 1> in_;
  Eigen::Array<Complex<Scalar>, Eigen::Dynamic, 1> out_;
};

using Propagatord = Propagator<double>;

template <typename Scalar>
void apply_kick(WalkState<Scalar>& state, Scalar k) {
  WalkParams p;
  p.k = static_cast<double>(k);
  Propagator<Scalar> prop(state.half_width(), p);
  prop.apply_kick(state);
}

template <typename Scalar>
void step(WalkState<Scalar>& state, const CoinMatrix<Scalar>& coin, const WalkParams& params) {
  Propagator<Scalar> prop(state.half_width(), params);
  prop.step(state, coin);
}

/// Per-step observable records, index t for t = 0..N.
struct Trajectory {
  std::vector<WinRecord> records;
  std::vector<std::string> coin_labels;  // coin_labels[t-1] drove step t
  MomentumDistributiond final_distribution;

  int steps() const { return static_cast<int>(records.size()) - 1; }
};

/// Runs N steps, asking `coin_for_step(t)` for the coin of step t = 1..N.
/// `observer(t, state)`, when set, sees the state after each record.
template <typename Scalar, typename CoinSource>
Trajectory evolve_with(WalkState<Scalar>& state, CoinSource&& coin_for_step, Propagator<Scalar>& prop, int steps,
                       const std::function<void(int, const WalkState<Scalar>&)>& observer = {}) {
  if (steps < 0) throw InvalidArgument("step count must be >= 0");
  state.check_boundary(static_cast<Scalar>(prop.params().leak_tolerance));
  Trajectory traj;
  traj.records.reserve(static_cast<std::size_t>(steps) + 1);
  RunningAverage<double> avg;
  auto record = [&](int t) {
    const double o = static_cast<double>(winning_probability(state));
    traj.records.push_back({t, o, avg.push(o)});
    if (observer) observer(t, state);
  };
  record(0);
  for (int t = 1; t <= steps; ++t) {
    prop.step(state, coin_for_step(t));
    record(t);
  }
  auto dist = momentum_distribution(state);
  traj.final_distribution =
      MomentumDistributiond(dist.half_width(), dist.probabilities().template cast<double>());
  return traj;
}

template <typename Scalar>
Trajectory evolve(WalkState<Scalar> state, const GameSchedule<Scalar>& schedule, const WalkParams& params, int steps,
                  const std::function<void(int, const WalkState<Scalar>&)>& observer = {}) {
  Propagator<Scalar> prop(state.half_width(), params);
  Trajectory traj = evolve_with(
      state, [&](int t) -> const CoinMatrix<Scalar>& { return schedule.coin_for_step(t); }, prop, steps, observer);
  traj.coin_labels.reserve(static_cast<std::size_t>(steps));
  for (int t = 1; t <= steps; ++t) traj.coin_labels.push_back(schedule.label_for_step(t));
  return traj;
}

}  // namespace qwalk
