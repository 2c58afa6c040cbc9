#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

#include "qwalk/coin.hpp"
#include "qwalk/errors.hpp"

namespace qwalk {

enum class PropagatorKind { kIdeal, kKickedRotor };

inline std::string_view to_string(PropagatorKind kind) {
  return kind == PropagatorKind::kIdeal ? "ideal" : "kicked-rotor";
}

inline PropagatorKind parse_propagator(std::string_view name) {
  if (name == "ideal") return PropagatorKind::kIdeal;
  if (name == "kicked-rotor") return PropagatorKind::kKickedRotor;
  throw InvalidArgument("unknown propagator '" + std::string(name) + "'");
}

struct WalkParams {
  double k = 1.56;
  double tau = 4.0 * std::numbers::pi;
  double beta = 0.0;
  PropagatorKind propagator = PropagatorKind::kKickedRotor;
  bool light_shift = false;
  /// Edge-mass threshold for the boundary guard; infinity disables it.
  double leak_tolerance = 1e-10;

  void validate() const {
    if (!(k >= 0) || !std::isfinite(k)) throw InvalidArgument("kick strength must be finite and >= 0");
    if (!std::isfinite(tau)) throw InvalidArgument("kick period must be finite");
    if (!(beta >= 0 && beta < 1)) throw InvalidArgument("quasimomentum must lie in [0, 1)");
    if (!(leak_tolerance > 0)) throw InvalidArgument("leak tolerance must be positive");
  }

  bool operator==(const WalkParams&) const = default;
};

/// Named coins applied in a repeating pattern, e.g. {A, B} with [A, B, B].
template <typename Scalar>
class GameSchedule {
 public:
  GameSchedule(std::map<std::string, CoinMatrix<Scalar>> coins, std::vector<std::string> pattern)
      : coins_(std::move(coins)), pattern_(std::move(pattern)) {
    if (pattern_.empty()) throw InvalidArgument("schedule pattern must not be empty");
    resolved_.reserve(pattern_.size());
    for (const auto& label : pattern_) {
      auto it = coins_.find(label);
      if (it == coins_.end()) throw InvalidArgument("schedule references unknown coin '" + label + "'");
      resolved_.push_back(it->second);
    }
  }

  /// Coin used by step t >= 1.
  const CoinMatrix<Scalar>& coin_for_step(int t) const {
    return resolved_[static_cast<std::size_t>(t - 1) % resolved_.size()];
  }
  const std::string& label_for_step(int t) const {
    return pattern_[static_cast<std::size_t>(t - 1) % pattern_.size()];
  }

  const std::vector<std::string>& pattern() const { return pattern_; }
  const std::map<std::string, CoinMatrix<Scalar>>& coins() const { return coins_; }

 private:
  std::map<std::string, CoinMatrix<Scalar>> coins_;
  std::vector<std::string> pattern_;
  std::vector<CoinMatrix<Scalar>> resolved_;
};

using GameScheduled = GameSchedule<double>;

/// Default lattice half-width for an N-step run: the smallest L >= 2N + 32
/// whose ring size 2L + 1 factors into 3, 5 and 7.
inline int default_half_width(int steps) {
  auto smooth = [](int m) {
    for (int p : {3, 5, 7}) {
      while (m % p == 0) m /= p;
    }
    return m == 1;
  };
  int half = 2 * std::max(steps, 0) + 32;
  while (!smooth(2 * half + 1)) ++half;
  return half;
}

}  // namespace qwalk
