#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "qwalk/errors.hpp"
#include "qwalk/walk_state.hpp"

namespace qwalk {

/// P(n) for n in [-L, L], coin traced out.
template <typename Scalar>
class MomentumDistribution {
 public:
  MomentumDistribution() = default;
  MomentumDistribution(int half_width, Eigen::Array<Scalar, Eigen::Dynamic, 1> probabilities)
      : half_width_(half_width), p_(std::move(probabilities)) {
    if (p_.size() != 2 * half_width_ + 1) throw InvalidArgument("distribution size does not match lattice");
  }

  static MomentumDistribution zeros(int half_width) {
    return MomentumDistribution(half_width, Eigen::Array<Scalar, Eigen::Dynamic, 1>::Zero(2 * half_width + 1));
  }

  int half_width() const { return half_width_; }
  int size() const { return static_cast<int>(p_.size()); }
  Scalar operator()(int n) const { return p_(n + half_width_); }
  Scalar& operator()(int n) { return p_(n + half_width_); }
  const Eigen::Array<Scalar, Eigen::Dynamic, 1>& probabilities() const { return p_; }
  Eigen::Array<Scalar, Eigen::Dynamic, 1>& probabilities() { return p_; }

  Scalar total() const { return p_.sum(); }
  Scalar right_mass() const { return p_.tail(half_width_).sum(); }
  Scalar left_mass() const { return p_.head(half_width_).sum(); }

  /// Sum of P(n) over n in [lo, hi], clipped to the lattice.
  Scalar window_mass(int lo, int hi) const {
    Scalar s = 0;
    for (int n = std::max(lo, -half_width_); n <= std::min(hi, half_width_); ++n) s += (*this)(n);
    return s;
  }

 private:
  int half_width_ = 0;
  Eigen::Array<Scalar, Eigen::Dynamic, 1> p_;
};

using MomentumDistributiond = MomentumDistribution<double>;

template <typename Scalar>
MomentumDistribution<Scalar> momentum_distribution(const WalkState<Scalar>& state) {
  const auto& a = state.amplitudes();
  Eigen::Array<Scalar, Eigen::Dynamic, 1> p = (a.row(0).abs2() + a.row(1).abs2()).transpose();
  return MomentumDistribution<Scalar>(state.half_width(), std::move(p));
}

/// O = P_R - P_L; n = 0 contributes to neither side.
template <typename Scalar>
Scalar winning_probability(const MomentumDistribution<Scalar>& dist) {
  return dist.right_mass() - dist.left_mass();
}

template <typename Scalar>
Scalar winning_probability(const WalkState<Scalar>& state) {
  const auto& a = state.amplitudes();
  const int L = state.half_width();
  const Scalar right = a.rightCols(L).abs2().sum();
  const Scalar left = a.leftCols(L).abs2().sum();
  return right - left;
}

/// Mean of O(0..N): divides by the number of records, N + 1.
template <typename Scalar>
Scalar time_averaged(std::span<const Scalar> records) {
  if (records.empty()) throw InvalidArgument("time average needs at least one record");
  Scalar sum = 0;
  for (Scalar o : records) sum += o;
  return sum / static_cast<Scalar>(records.size());
}

template <typename Scalar>
class RunningAverage {
 public:
  Scalar push(Scalar value) {
    sum_ += value;
    ++count_;
    return mean();
  }
  Scalar mean() const { return count_ == 0 ? Scalar(0) : sum_ / static_cast<Scalar>(count_); }
  std::size_t count() const { return count_; }

 private:
  Scalar sum_ = 0;
  std::size_t count_ = 0;
};

struct WinRecord {
  int step = 0;
  double winning = 0;
  double time_average = 0;
};

}  // namespace qwalk
