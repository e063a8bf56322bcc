#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <set>

#include "relengine/bat.hpp"
#include "support.hpp"

using namespace relengine;
using testing_support::bridge;

TEST_CASE("next_vector follows the first-zero rule") {
  CHECK(next_vector(ArcStateVector{0, 0, 1}) == ArcStateVector{1, 0, 1});
  CHECK(next_vector(ArcStateVector{1, 0, 1}) == ArcStateVector{0, 1, 1});
  CHECK(next_vector(ArcStateVector{1, 1, 0}) == ArcStateVector{0, 0, 1});
  CHECK_FALSE(next_vector(ArcStateVector{1, 1, 1}).has_value());
  CHECK(ArcStateVector{0, 1, 1}.to_string() == "(0, 1, 1)");
}

TEST_CASE("enumeration order") {
  std::vector<ArcStateVector> two;
  for (const auto& x : enumerate_vectors(2)) two.push_back(x);
  CHECK(two == std::vector<ArcStateVector>{{0, 0}, {1, 0}, {0, 1}, {1, 1}});

  int count = 0;
  for ([[maybe_unused]] const auto& x : enumerate_vectors(7)) ++count;
  CHECK(count == 128);

  std::vector<ArcStateVector> tail;
  for (const auto& x : enumerate_vectors(3, ArcStateVector{1, 1, 0})) tail.push_back(x);
  CHECK(tail == std::vector<ArcStateVector>{{1, 1, 0}, {0, 0, 1}, {1, 0, 1}, {0, 1, 1}, {1, 1, 1}});
}

TEST_CASE("enumeration is binary counting with a_1 least significant") {
  for (int m : {1, 5, 12, 16}) {
    std::uint64_t expected = 0;
    std::set<std::uint64_t> seen;
    for (const auto& x : enumerate_vectors(m)) {
      REQUIRE(x.bat_index() == expected);
      std::uint64_t value = 0;
      for (int i = 1; i <= m; ++i) value |= std::uint64_t{x[i]} << (i - 1);
      REQUIRE(value == expected);
      seen.insert(value);
      ++expected;
    }
    CHECK(expected == (std::uint64_t{1} << m));
    CHECK(seen.size() == expected);
  }
  CHECK(ArcStateVector{0, 1, 0, 0, 0, 1, 0}.bat_index() == 34);
}

TEST_CASE("order relations") {
  const ArcStateVector a{1, 0, 1};
  const ArcStateVector b{1, 1, 1};
  CHECK(dominated_by(a, b));
  CHECK(strictly_dominated_by(a, b));
  CHECK_FALSE(strictly_dominated_by(a, a));
  CHECK(dominated_by(a, a));
  CHECK_FALSE(dominated_by(ArcStateVector{0, 1, 0}, ArcStateVector{1, 0, 1}));
  CHECK(bat_after(ArcStateVector{0, 1, 1}, ArcStateVector{1, 0, 1}));
  CHECK_FALSE(bat_after(ArcStateVector{1, 0, 1}, ArcStateVector{0, 1, 1}));
}

TEST_CASE("connectivity on the bridge") {
  CHECK(is_connected(bridge(), ArcStateVector{0, 1, 0, 1, 1, 0, 1}));
  CHECK(is_connected(bridge(), ArcStateVector{0, 1, 0, 0, 0, 1, 0}));
  CHECK_FALSE(is_connected(bridge(), ArcStateVector{0, 0, 1, 1, 1, 1, 1}));
  CHECK_THROWS_AS(is_connected(bridge(), ArcStateVector{1, 1}), std::invalid_argument);
}

TEST_CASE("vector probability") {
  CHECK(vector_probability(bridge(), ArcStateVector::all_ones(7)) ==
        doctest::Approx(0.4782969).epsilon(1e-15));
  const Network stage = parse_network_text("nodes 3\narc 1 2 0.9\narc 1 3 0.9\narc 2 3 0.9\n");
  CHECK(vector_probability(stage, ArcStateVector{1, 0, 0}) == doctest::Approx(0.009).epsilon(1e-14));
  const Network five = parse_network_text(
      "nodes 6\narc 1 2 0.8\narc 2 3 0.8\narc 3 4 0.8\narc 4 5 0.8\narc 5 6 0.8\n");
  CHECK(std::abs(vector_probability(five, ArcStateVector{0, 1, 0, 1, 1}) - 0.02048) < 1e-15);
}

TEST_CASE("oracle on small closed forms") {
  CHECK(reliability_oracle(parse_network_text("nodes 2\narc 1 2 0.7\n")) ==
        doctest::Approx(0.7).epsilon(1e-15));
  CHECK(reliability_oracle(parse_network_text("nodes 3\narc 1 2 0.9\narc 2 3 0.9\n")) ==
        doctest::Approx(0.81).epsilon(1e-15));
  // bridge at p: 2p^2 + 2p^3 - 5p^4 + 2p^5 for the 4-node case
  const double p = 0.9;
  const double four = 2 * p * p + 2 * std::pow(p, 3) - 5 * std::pow(p, 4) + 2 * std::pow(p, 5);
  CHECK(std::abs(reliability_oracle(load_network(RELENGINE_DATA_DIR "/bridge4.net")) - four) < 1e-14);
  CHECK(std::abs(reliability_oracle(bridge()) - 0.9781803) < 1e-12);
}

TEST_CASE("oracle cap") {
  const Network wide = generate({.family = Family::kSeries, .k = 31, .uniform_p = 0.9, .seed = {}});
  CHECK_THROWS_AS(reliability_oracle(wide), OracleCapExceeded);
  CHECK_THROWS_AS(reliability_oracle(bridge(), {.cap = 6, .deadline = {}}), OracleCapExceeded);
  CHECK(reliability_oracle(bridge(), {.cap = 7, .deadline = {}}) > 0.97);

  setenv("RELENGINE_ORACLE_CAP", "12", 1);
  CHECK(oracle_cap_from_env() == 12);
  setenv("RELENGINE_ORACLE_CAP", "junk", 1);
  CHECK(oracle_cap_from_env() == kDefaultOracleCap);
  unsetenv("RELENGINE_ORACLE_CAP");
  CHECK(oracle_cap_from_env() == kDefaultOracleCap);
}

TEST_CASE("oracle respects its deadline") {
  const Network net = generate({.family = Family::kGrid, .k = 4, .uniform_p = 0.9, .seed = {}});
  CHECK_THROWS_AS(reliability_oracle(net, {.cap = 40, .deadline = Deadline::after(std::chrono::milliseconds(1))}),
                  BudgetExceeded);
}

TEST_CASE("connectivity is monotone and mass sums to one") {
  for (const auto& c : testing_support::random_cases(30, 3, 7, 3, 12, 7)) {
    const Network net = random_network(c.n, c.m, c.seed);
    double mass = 0.0;
    for (const auto& x : enumerate_vectors(c.m)) {
      mass += vector_probability(net, x);
      if (!is_connected(net, x)) continue;
      for (int i = 1; i <= c.m; ++i) {
        if (x[i]) continue;
        ArcStateVector y = x;
        y.set(i, true);
        REQUIRE(is_connected(net, y));
      }
    }
    CHECK(std::abs(mass - 1.0) < 1e-12);
  }
  double mass = 0.0;
  const Network sixteen = random_network(8, 16, 3);
  for (const auto& x : enumerate_vectors(16)) mass += vector_probability(sixteen, x);
  CHECK(std::abs(mass - 1.0) < 1e-12);
}

TEST_CASE("plain BAT equals the reference sum") {
  for (const auto& c : testing_support::random_cases(60, 3, 8, 3, 13, 11)) {
    const Network net = random_network(c.n, c.m, c.seed);
    const double reference = testing_support::brute_reliability(net);
    ExhaustiveStats stats;
    CHECK(std::abs(reliability_bat(net, {}, &stats) - reference) < 1e-12);
    CHECK(stats.vectors == (std::uint64_t{1} << c.m));
    CHECK(std::abs(reliability_oracle(net) - reference) < 1e-12);
  }
}
