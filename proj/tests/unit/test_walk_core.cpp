#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "qwalk/coin.hpp"
#include "qwalk/observables.hpp"
#include "qwalk/params.hpp"
#include "qwalk/walk_state.hpp"

using namespace qwalk;
using cd = std::complex<double>;

namespace {

constexpr double kPi = std::numbers::pi;

double max_abs(const Eigen::Matrix2cd& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("coin entries follow the defining formula") {
  const double a = deg_to_rad(137.2), g = deg_to_rad(29.4), x = deg_to_rad(52.1);
  const CoinMatrixd m = make_coin(a, g, x);
  CHECK(max_abs(m.matrix() - oracle::coin(a, g, x)) < 1e-15);
  CHECK(std::abs(m(0, 0) - std::polar(1.0, a) * std::cos(x)) < 1e-15);
  CHECK(max_abs(m.matrix().adjoint() * m.matrix() - Eigen::Matrix2cd::Identity()) < 1e-12);
  CHECK(std::abs(m.matrix().determinant() - cd(1, 0)) < 1e-12);
}

TEST_CASE("coin special cases") {
  CHECK(max_abs(make_coin(0.0, 0.0, 0.0).matrix() - Eigen::Matrix2cd::Identity()) == 0.0);
  Eigen::Matrix2cd flip;
  flip << 0, -1, 1, 0;
  CHECK(max_abs(make_coin(0.0, 0.0, kPi / 2).matrix() - flip) < 1e-16);
  CHECK_THROWS_AS(make_coin(std::nan(""), 0.0, 0.0), InvalidArgument);
  CHECK_THROWS_AS(make_coin(0.0, std::numeric_limits<double>::infinity(), 0.0), InvalidArgument);
}

TEST_CASE("random coins are unitary with unit determinant") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-10, 10);
  for (int i = 0; i < 1000; ++i) {
    const CoinMatrixd m = make_coin(u(rng), u(rng), u(rng));
    CHECK(max_abs(m.matrix().adjoint() * m.matrix() - Eigen::Matrix2cd::Identity()) < 1e-12);
    CHECK(std::abs(m.matrix().determinant() - cd(1, 0)) < 1e-12);
  }
}

TEST_CASE("gamma offset keeps alpha and chi") {
  const CoinMatrixd m = make_coin(0.3, 1.1, 0.7);
  const CoinMatrixd n = m.with_gamma_offset(0.25);
  CHECK(n.alpha() == m.alpha());
  CHECK(n.chi() == m.chi());
  CHECK(n.gamma() == doctest::Approx(1.35));
  CHECK(max_abs(n.matrix() - oracle::coin(0.3, 1.35, 0.7)) < 1e-15);
}

TEST_CASE("default ratchet state") {
  const WalkStated s = default_ratchet_state<double>(5);
  const double r = 1 / std::sqrt(6.0);
  CHECK(std::abs(s.at(0, -1) - cd(0, -r)) < 1e-15);
  CHECK(std::abs(s.at(0, 0) - cd(r, 0)) < 1e-15);
  CHECK(std::abs(s.at(0, 1) - cd(0, r)) < 1e-15);
  CHECK(std::abs(s.at(1, -1) - cd(r, 0)) < 1e-15);
  CHECK(std::abs(s.at(1, 0) - cd(0, r)) < 1e-15);
  CHECK(std::abs(s.at(1, 1) - cd(-r, 0)) < 1e-15);
  CHECK(std::abs(s.norm_squared() - 1) < 1e-12);
  CHECK(s.at(0, 2) == cd(0, 0));
}

TEST_CASE("ratchet state with the e^{-i s pi/2} phases over five momenta") {
  const std::array<int, 5> s{-2, -1, 0, 1, 2};
  const Vector2c<double> up(cd(1, 0), cd(0, 0));
  const WalkStated st = ratchet_state<double>(4, s, up, -1);
  const double r = 1 / std::sqrt(5.0);
  const std::array<cd, 5> expect{cd(-r, 0), cd(0, r), cd(r, 0), cd(0, -r), cd(-r, 0)};
  for (int i = 0; i < 5; ++i) CHECK(std::abs(st.at(0, s[i]) - expect[i]) < 1e-15);
  CHECK(st.amplitudes().row(1).abs2().sum() == 0.0);
}

TEST_CASE("single momentum state and lattice errors") {
  const WalkStated s = single_momentum_state<double>(3, 0, balanced_coin<double>());
  CHECK(std::abs(s.norm_squared() - 1) < 1e-12);
  CHECK(momentum_distribution(s)(0) == doctest::Approx(1.0));
  const std::array<int, 1> far{5};
  CHECK_THROWS_AS(ratchet_state<double>(3, far, balanced_coin<double>()), LatticeTooSmall);
  CHECK_THROWS_AS(single_momentum_state<double>(3, 4, balanced_coin<double>()), LatticeTooSmall);
  CHECK_THROWS_AS(single_momentum_state<double>(3, 0, Vector2c<double>::Zero()), InvalidArgument);
}

TEST_CASE("boundary guard") {
  WalkStated s(10);
  s.at(0, 0) = 1;
  CHECK_NOTHROW(s.check_boundary(1e-10));
  s.at(0, 0) = std::sqrt(1 - 1e-9);
  s.at(1, 8) = std::sqrt(1e-9);  // |n| >= L - 2
  CHECK(s.edge_mass() == doctest::Approx(1e-9));
  CHECK_THROWS_AS(s.check_boundary(1e-10), LatticeTooSmall);
  CHECK_NOTHROW(s.check_boundary(std::numeric_limits<double>::infinity()));
}

TEST_CASE("momentum distribution and winning probability") {
  WalkStated s(5);
  s.at(0, 3) = 1;
  const auto d = momentum_distribution(s);
  CHECK(d(3) == 1.0);
  CHECK(d.total() == 1.0);
  CHECK(d.probabilities().sum() - d(3) == 0.0);

  const auto ratchet = momentum_distribution(default_ratchet_state<double>(5));
  for (int n : {-1, 0, 1}) CHECK(ratchet(n) == doctest::Approx(1.0 / 3).epsilon(1e-14));
  CHECK(std::abs(winning_probability(ratchet)) < 1e-15);

  WalkStated two(5);
  two.at(1, 2) = 1;
  CHECK(winning_probability(two) == 1.0);
  CHECK(winning_probability(momentum_distribution(two)) == 1.0);

  WalkStated sym(5);
  sym.at(0, -2) = 0.6;
  sym.at(1, 2) = cd(0, 0.6);
  sym.at(0, 0) = 0.5291502622129181;
  CHECK(std::abs(winning_probability(sym)) < 1e-16);
}

TEST_CASE("time average normalisation") {
  const std::vector<double> c(7, 0.3);
  CHECK(time_averaged<double>(c) == doctest::Approx(0.3));
  const std::vector<double> o{0.0, 1.0};
  CHECK(time_averaged<double>(o) == 0.5);
  CHECK_THROWS_AS(time_averaged<double>(std::span<const double>{}), InvalidArgument);
  RunningAverage<double> avg;
  avg.push(0.0);
  CHECK(avg.push(1.0) == 0.5);
  CHECK(avg.count() == 2);
}

TEST_CASE("schedule cycles through the pattern") {
  const std::map<std::string, CoinMatrixd> coins{{"A", make_coin(0.1, 0.2, 0.3)}, {"B", make_coin(0.4, 0.5, 0.6)}};
  const GameScheduled abb(coins, {"A", "B", "B"});
  std::string seq;
  for (int t = 1; t <= 6; ++t) seq += abb.label_for_step(t);
  CHECK(seq == "ABBABB");
  CHECK(abb.coin_for_step(4).alpha() == 0.1);
  CHECK_THROWS_AS(GameScheduled(coins, {}), InvalidArgument);
  CHECK_THROWS_AS(GameScheduled(coins, {"C"}), InvalidArgument);
}

TEST_CASE("walk parameter validation") {
  WalkParams p;
  CHECK_NOTHROW(p.validate());
  p.beta = 1.0;
  CHECK_THROWS_AS(p.validate(), InvalidArgument);
  p.beta = 0.0;
  p.k = -1;
  CHECK_THROWS_AS(p.validate(), InvalidArgument);
  CHECK(parse_propagator("ideal") == PropagatorKind::kIdeal);
  CHECK_THROWS_AS(parse_propagator("lazy"), InvalidArgument);
}

TEST_CASE("default lattice size") {
  CHECK(default_half_width(50) == 157);
  CHECK(default_half_width(500) == 1093);
  for (int n : {0, 1, 10, 77, 200}) CHECK(default_half_width(n) >= 2 * n + 32);
}
