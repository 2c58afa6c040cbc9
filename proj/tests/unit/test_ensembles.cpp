#include <cmath>
#include <cstring>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "qwalk/ensembles.hpp"
#include "qwalk/philox.hpp"

using namespace qwalk;

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<NamedSchedule> optimized_walks() {
  const std::map<std::string, CoinMatrixd> coins{{"A", make_coin_degrees(0.0, 246.96, 184.32)},
                                                 {"B", make_coin_degrees(0.0, 282.1, 67.4)}};
  return {{"A", GameScheduled(coins, {"A"})},
          {"B", GameScheduled(coins, {"B"})},
          {"ABB", GameScheduled(coins, {"A", "B", "B"})}};
}

bool same_bits(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

}  // namespace

TEST_CASE("Philox4x32-10 known-answer vectors") {
  using C = Philox4x32::Counter;
  CHECK(Philox4x32(0)(C{0, 0, 0, 0}) == C{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
  CHECK(Philox4x32(~0ull)(C{~0u, ~0u, ~0u, ~0u}) == C{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
  const std::uint64_t key = (std::uint64_t{0x299f31d0} << 32) | 0xa4093822;
  CHECK(Philox4x32(key)(C{0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}) ==
        C{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("unit conversion covers [0, 1)") {
  CHECK(Philox4x32::to_unit(0, 0) == 0.0);
  CHECK(Philox4x32::to_unit(~0u, ~0u) < 1.0);
  CHECK(Philox4x32::to_unit(0x80000000u, 0) == 0.5);
}

TEST_CASE("noise streams") {
  const auto walks = optimized_walks();
  const GameScheduled& a = walks[0].schedule;

  SUBCASE("zero width returns the base coin exactly") {
    const auto s = noisy_coin_stream(a, NoiseSpec{0.0, 1, 5}, "A", 0);
    for (int t = 1; t <= 20; ++t) {
      CHECK(s(t).matrix() == a.coin_for_step(t).matrix());
      CHECK(s.delta(t) == 0.0);
    }
  }
  SUBCASE("streams are pure functions of their key") {
    const NoiseSpec spec{kPi / 5, 50, 1234};
    const auto s0 = noisy_coin_stream(a, spec, "A", 0);
    const auto s0b = noisy_coin_stream(a, spec, "A", 0);
    const auto s1 = noisy_coin_stream(a, spec, "A", 1);
    const auto other = noisy_coin_stream(a, spec, "ABB", 0);
    const auto beta1 = noisy_coin_stream(a, spec, "A", 0, 1);
    int diff_r = 0, diff_walk = 0, diff_beta = 0;
    for (int t = 1; t <= 100; ++t) {
      CHECK(s0.delta(t) == s0b.delta(t));
      CHECK(std::abs(s0.delta(t)) <= kPi / 5);
      diff_r += s0.delta(t) != s1.delta(t);
      diff_walk += s0.delta(t) != other.delta(t);
      diff_beta += s0.delta(t) != beta1.delta(t);
    }
    CHECK(diff_r == 100);
    CHECK(diff_walk == 100);
    CHECK(diff_beta == 100);
    const CoinMatrixd c = s0(7);
    CHECK(c.gamma() == a.coin_for_step(7).gamma() + s0.delta(7));
    CHECK(c.chi() == a.coin_for_step(7).chi());
    CHECK(c.alpha() == a.coin_for_step(7).alpha());
  }
  SUBCASE("uniform statistics") {
    const double width = kPi / 5;
    const PhaseNoiseStream s(width, StreamKey{99, fnv1a32("A"), 0, 0});
    const int n = 100000;
    double sum = 0, sq = 0, lag = 0, prev = 0;
    for (int t = 1; t <= n; ++t) {
      const double d = s.delta(t);
      sum += d;
      sq += d * d;
      lag += d * prev;
      prev = d;
    }
    const double sigma = width / std::sqrt(3.0);
    CHECK(std::abs(sum / n) < 3 * sigma / std::sqrt(double(n)));
    CHECK(std::abs(sq / n - sigma * sigma) < 0.02 * sigma * sigma);
    CHECK(std::abs(lag / n) < 4 * sigma * sigma / std::sqrt(double(n)));
  }
  CHECK_THROWS_AS(NoiseSpec({-1.0, 1, 0}).validate(), InvalidArgument);
  CHECK_THROWS_AS(NoiseSpec({0.1, 0, 0}).validate(), InvalidArgument);
}

TEST_CASE("quasimomentum samples") {
  CHECK(sample_quasimomenta({0.0, 5, 1}) == std::vector<double>(5, 0.0));
  const auto b = sample_quasimomenta({0.01, 200, 77});
  CHECK(b == sample_quasimomenta({0.01, 200, 77}));
  CHECK(b != sample_quasimomenta({0.01, 200, 78}));
  double sum = 0, sq = 0;
  for (double x : b) {
    CHECK(x >= 0.0);
    CHECK(x < 1.0);
    const double centred = x > 0.5 ? x - 1 : x;
    sum += centred;
    sq += centred * centred;
  }
  const double mean = sum / 200;
  const double sd = std::sqrt((sq - 200 * mean * mean) / 199);
  CHECK(std::abs(sd - 0.01) < 0.2 * 0.01);
  CHECK_THROWS_AS(QuasimomentumSpec({-0.1, 1, 0}).validate(), InvalidArgument);
  CHECK_THROWS_AS(QuasimomentumSpec({0.1, 0, 0}).validate(), InvalidArgument);
}

TEST_CASE("deterministic ensemble equals evolve") {
  const auto walks = optimized_walks();
  const int N = 50;
  const EnsembleResult r = run_ensemble(walks, WalkParams{}, NoiseSpec{}, QuasimomentumSpec{}, N);
  for (const auto& w : walks) {
    const Trajectory t = evolve(default_ratchet_state<double>(r.half_width), w.schedule, WalkParams{}, N);
    const auto& e = r.walk(w.label);
    for (int s = 0; s <= N; ++s) {
      CHECK(e.mean_winning[s] == t.records[s].winning);
      CHECK(e.mean_time_average[s] == t.records[s].time_average);
    }
    CHECK((e.mean_final_distribution.probabilities() == t.final_distribution.probabilities()).all());
  }
  CHECK_THROWS_AS(r.walk("C"), InvalidArgument);
}

TEST_CASE("ensemble is bit-identical across thread counts and linear in P(n)") {
  const auto walks = optimized_walks();
  const NoiseSpec noise{kPi / 3, 6, 2};
  const QuasimomentumSpec qm{0.02, 5, 2};
  EnsembleOptions one;
  one.threads = 1;
  one.block_size = 4;
  EnsembleOptions many = one;
  many.threads = 3;
  const EnsembleResult a = run_ensemble(walks, WalkParams{}, noise, qm, 20, one);
  const EnsembleResult b = run_ensemble(walks, WalkParams{}, noise, qm, 20, many);
  CHECK(a.betas == b.betas);
  for (std::size_t w = 0; w < walks.size(); ++w) {
    CHECK(same_bits(a.walks[w].mean_winning, b.walks[w].mean_winning));
    CHECK(same_bits(a.walks[w].mean_time_average, b.walks[w].mean_time_average));
    CHECK(same_bits(a.walks[w].final_winning, b.walks[w].final_winning));
    CHECK((a.walks[w].mean_final_distribution.probabilities() == b.walks[w].mean_final_distribution.probabilities())
              .all());
    const double from_dist = winning_probability(a.walks[w].mean_final_distribution);
    CHECK(std::abs(a.walks[w].mean_winning.back() - from_dist) < 1e-12);
    double mean_bar = 0;
    for (double x : a.walks[w].final_time_average) mean_bar += x;
    CHECK(std::abs(mean_bar / 30 - a.walks[w].mean_time_average.back()) < 1e-12);
  }
}

TEST_CASE("noise changes the ensemble and stays bounded") {
  const auto walks = optimized_walks();
  const EnsembleResult clean = run_ensemble(walks, WalkParams{}, NoiseSpec{}, QuasimomentumSpec{}, 10);
  const EnsembleResult noisy = run_ensemble(walks, WalkParams{}, NoiseSpec{kPi / 5, 4, 1}, QuasimomentumSpec{}, 10);
  CHECK(clean.walk("A").mean_winning.back() != noisy.walk("A").mean_winning.back());
  for (const auto& w : noisy.walks) {
    for (double o : w.mean_winning) CHECK(std::abs(o) <= 1.0);
  }
}

TEST_CASE("lattice errors name the offending trajectory") {
  const auto walks = optimized_walks();
  EnsembleOptions o;
  o.half_width = 12;
  o.threads = 1;
  try {
    run_ensemble(walks, WalkParams{}, NoiseSpec{0.1, 2, 1}, QuasimomentumSpec{}, 50, o);
    FAIL("expected LatticeTooSmall");
  } catch (const LatticeTooSmall& e) {
    const std::string msg = e.what();
    CHECK(msg.find("realization 0") != std::string::npos);
    CHECK(msg.find("beta index 0") != std::string::npos);
  }
}
