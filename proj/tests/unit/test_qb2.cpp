#include <doctest.h>

#include <cmath>

#include "relengine/qb2.hpp"
#include "relengine/quick_bat.hpp"
#include "support.hpp"

using namespace relengine;
using testing_support::bridge;

TEST_CASE("bridge reliability and structural counts") {
  const Qb2Result r = reliability_qb2(bridge());
  CHECK(std::abs(r.reliability - 0.9781803) < 1e-12);
  CHECK(r.stage_count == 3);
  CHECK(r.counters.stms_per_stage == std::vector<std::size_t>{3, 5, 3, 3, 1});
  std::size_t total = 0;
  for (std::size_t k : r.counters.stms_per_stage) total += k;
  CHECK(total == 15);
  REQUIRE(r.stage_masses.size() == 3);
  CHECK(std::abs(r.stage_masses[0].discarded - 0.01) < 1e-12);
  CHECK(std::abs(r.stage_masses[2].discarded - 0.01) < 1e-12);
}

TEST_CASE("bridge with per-arc probabilities equals the reference sum") {
  const Network net = testing_support::bridge_table1();
  CHECK(std::abs(reliability_qb2(net).reliability - testing_support::brute_reliability(net)) < 1e-12);
}

TEST_CASE("series chains") {
  for (int k = 1; k <= 12; ++k) {
    const Network chain = generate({.family = Family::kSeries, .k = k, .uniform_p = 0.9, .seed = {}});
    CHECK(std::abs(reliability_qb2(chain).reliability - std::pow(0.9, k)) < 1e-13);
  }
}

TEST_CASE("generated families agree with quick BAT") {
  for (Family f : {Family::kLadder, Family::kGrid, Family::kBridgeChain}) {
    for (int k = 1; k <= 3; ++k) {
      const Network net = generate({.family = f, .k = k, .uniform_p = 0.0, .seed = 77 + k});
      if (net.arc_count() > 24) continue;
      CHECK(std::abs(reliability_qb2(net).reliability - reliability_quick_bat(net)) < 1e-10);
    }
  }
}

TEST_CASE("qb2 equals the reference sum on random networks") {
  int cases = 0;
  for (const auto& c : testing_support::random_cases(300, 4, 8, 5, 14, 2024)) {
    const Network net = random_network(c.n, c.m, c.seed);
    const Qb2Result r = reliability_qb2(net);
    const double reference = testing_support::brute_reliability(net);
    CHECK(std::abs(r.reliability - reference) < 1e-10);
    CHECK(std::abs(r.reliability - reliability_quick_bat(net)) < 1e-10);
    for (const StageMass& s : r.stage_masses) CHECK(std::abs(s.kept + s.discarded - 1.0) < 1e-12);
    CHECK(r.counters.stms_per_stage.size() == 2 * r.stage_masses.size() - 1);
    ++cases;
  }
  CHECK(cases == 300);
}

TEST_CASE("dense networks where boundary nodes link through earlier stages") {
  // complete graphs force wide boundaries; the fold must track which
  // unreached boundary nodes are already joined
  for (int n = 4; n <= 6; ++n) {
    const Network net = random_network(n, n * (n - 1) / 2, 900 + n);
    CHECK(std::abs(reliability_qb2(net).reliability - testing_support::brute_reliability(net)) < 1e-10);
  }
}

TEST_CASE("qb2 honours its deadline") {
  const Network net = generate({.family = Family::kGrid, .k = 6, .uniform_p = 0.9, .seed = {}});
  CHECK_THROWS_AS(reliability_qb2(net, Deadline::after(std::chrono::milliseconds(1))), BudgetExceeded);
}
