#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qwalk/coin.hpp"
#include "qwalk/errors.hpp"

namespace qwalk {

template <typename Scalar>
using AmplitudeArray = Eigen::Array<Complex<Scalar>, 2, Eigen::Dynamic, Eigen::RowMajor>;

/// Pure state on coin x momentum lattice. Row c holds coin component |c>,
/// column n + L holds momentum |n> for n in [-L, L].
template <typename Scalar>
class WalkState {
 public:
  explicit WalkState(int half_width = 0) : half_width_(half_width) {
    if (half_width < 0) throw InvalidArgument("lattice half-width must be non-negative");
    amps_ = AmplitudeArray<Scalar>::Zero(2, 2 * half_width + 1);
  }

  int half_width() const { return half_width_; }
  int size() const { return 2 * half_width_ + 1; }
  int index(int n) const { return n + half_width_; }
  bool contains(int n) const { return n >= -half_width_ && n <= half_width_; }

  Complex<Scalar>& at(int coin, int n) { return amps_(coin, index(n)); }
  const Complex<Scalar>& at(int coin, int n) const { return amps_(coin, index(n)); }

  AmplitudeArray<Scalar>& amplitudes() { return amps_; }
  const AmplitudeArray<Scalar>& amplitudes() const { return amps_; }

  Scalar norm_squared() const { return amps_.abs2().sum(); }

  /// Probability carried by sites with |n| >= L - margin.
  Scalar edge_mass(int margin = 2) const {
    const int inner = std::max(half_width_ - margin, 0);
    Scalar mass = 0;
    for (int n = inner; n <= half_width_; ++n) {
      mass += std::norm(amps_(0, index(n))) + std::norm(amps_(1, index(n)));
      if (n != 0) mass += std::norm(amps_(0, index(-n))) + std::norm(amps_(1, index(-n)));
    }
    return mass;
  }

  /// Throws LatticeTooSmall when edge_mass() reaches `tolerance`.
  void check_boundary(Scalar tolerance) const {
    if (!(tolerance < std::numeric_limits<Scalar>::infinity())) return;
    const Scalar mass = edge_mass();
    if (!(mass < tolerance)) {
      throw LatticeTooSmall("probability " + std::to_string(static_cast<double>(mass)) +
                            " at |n| >= L-2 exceeds " + std::to_string(static_cast<double>(tolerance)) +
                            " (L = " + std::to_string(half_width_) + ")");
    }
  }

  void normalize() { amps_ /= std::sqrt(norm_squared()); }

 private:
  int half_width_;
  AmplitudeArray<Scalar> amps_;
};

using WalkStated = WalkState<double>;

/// Ratchet preparation: momentum amplitudes e^{sign * i s pi/2} / sqrt(S) over
/// the listed s, tensored with the normalized coin spinor.
///
/// phase_sign = -1 is the e^{-i s pi/2} form; phase_sign = +1 gives
/// (-i, 1, i) on s = (-1, 0, 1), which is what default_ratchet_state uses.
template <typename Scalar>
WalkState<Scalar> ratchet_state(int half_width, std::span<const int> momenta,
                                const Vector2c<Scalar>& coin, int phase_sign = +1) {
  if (momenta.empty()) throw InvalidArgument("ratchet state needs at least one momentum");
  if (phase_sign != 1 && phase_sign != -1) throw InvalidArgument("phase sign must be +1 or -1");
  const Scalar coin_norm = coin.norm();
  if (!(coin_norm > 0) || !std::isfinite(coin_norm)) {
    throw InvalidArgument("coin amplitudes must not both be zero");
  }
  WalkState<Scalar> state(half_width);
  for (int s : momenta) {
    if (!state.contains(s)) {
      throw LatticeTooSmall("momentum " + std::to_string(s) + " outside lattice of half-width " +
                            std::to_string(half_width));
    }
  }
  const Vector2c<Scalar> spinor = coin / coin_norm;
  const Scalar weight = Scalar(1) / std::sqrt(static_cast<Scalar>(momenta.size()));
  for (int s : momenta) {
    // e^{i sign s pi/2} = i^{sign s}; use exact powers of i rather than polar().
    static constexpr int kQuarter[4][2] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    const int q = ((phase_sign * s) % 4 + 4) % 4;
    const Complex<Scalar> phase(kQuarter[q][0], kQuarter[q][1]);
    state.at(0, s) += weight * phase * spinor(0);
    state.at(1, s) += weight * phase * spinor(1);
  }
  state.normalize();
  return state;
}

/// Coin spinor (|0> + i|1>)/sqrt(2).
template <typename Scalar>
Vector2c<Scalar> balanced_coin() {
  const Scalar r = Scalar(1) / std::numbers::sqrt2_v<Scalar>;
  return Vector2c<Scalar>(Complex<Scalar>(r, 0), Complex<Scalar>(0, r));
}

/// (|0> + i|1>)/sqrt(2) x (-i|-1> + |0> + i|1>)/sqrt(3).
template <typename Scalar>
WalkState<Scalar> default_ratchet_state(int half_width) {
  static constexpr int kMomenta[] = {-1, 0, 1};
  return ratchet_state<Scalar>(half_width, kMomenta, balanced_coin<Scalar>(), +1);
}

/// Normalized coin spinor at the single momentum n.
template <typename Scalar>
WalkState<Scalar> single_momentum_state(int half_width, int n, const Vector2c<Scalar>& coin) {
  const Scalar coin_norm = coin.norm();
  if (!(coin_norm > 0) || !std::isfinite(coin_norm)) {
    throw InvalidArgument("coin amplitudes must not both be zero");
  }
  WalkState<Scalar> state(half_width);
  if (!state.contains(n)) {
    throw LatticeTooSmall("momentum " + std::to_string(n) + " outside lattice of half-width " +
                          std::to_string(half_width));
  }
  state.at(0, n) = coin(0) / coin_norm;
  state.at(1, n) = coin(1) / coin_norm;
  return state;
}

}  // namespace qwalk
