#include <doctest.h>

#include <cmath>
#include <random>

#include "relengine/qb2.hpp"
#include "relengine/stm.hpp"
#include "support.hpp"

using namespace relengine;
using testing_support::bridge;

namespace {

using M = SourceTargetMatrix;

const Stage& stage(const Decomposition& d, int index) { return d.stages.at(index - 1); }

double mass_of(const WeightedStmSet& set, const M& m) {
  const double* p = set.find(m);
  return p ? *p : -1.0;
}

M random_matrix(int rows, int cols, std::mt19937_64& rng) {
  M m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) m.set(r, c, rng() % 2 == 1);
  }
  return m;
}

// Entry (a, b) straight from the max-min definition.
M definition_product(const M& a, const M& b) {
  M out(a.rows(), b.cols());
  for (int r = 0; r < a.rows(); ++r) {
    for (int c = 0; c < b.cols(); ++c) {
      bool any = false;
      for (int h = 0; h < a.cols(); ++h) any = any || (a.at(r, h) && b.at(h, c));
      out.set(r, c, any);
    }
  }
  return out;
}

}  // namespace

TEST_CASE("matrix basics") {
  const M m{{1, 0}, {1, 1}};
  CHECK(m.rows() == 2);
  CHECK(m.cols() == 2);
  CHECK(m.at(1, 1));
  CHECK_FALSE(m.at(0, 1));
  CHECK(m.to_string() == "[1 0; 1 1]");
  CHECK(M(1, 3).is_zero());
  CHECK(M{{0, 1}} == M{{0, 1}});
  CHECK(StmHash{}(M{{0, 1}}) == StmHash{}(M{{0, 1}}));
  CHECK_FALSE(M{{0, 1}} == M{{1, 0}});
  CHECK_THROWS(M(1, 65));
}

TEST_CASE("stage 1 matrices") {
  const Decomposition d = decompose(bridge());
  const Stage& s = stage(d, 1);
  CHECK(stm_from_vector(bridge(), s, {0, 0}) == M{{0, 0}});
  CHECK(stm_from_vector(bridge(), s, {1, 0}) == M{{1, 0}});
  CHECK(stm_from_vector(bridge(), s, {0, 1}) == M{{0, 1}});
  CHECK(stm_from_vector(bridge(), s, {1, 1}) == M{{1, 1}});
}

TEST_CASE("stage 2 matrices") {
  const Decomposition d = decompose(bridge());
  const Stage& s = stage(d, 2);
  const M all{{1, 1}, {1, 1}};
  CHECK(stm_from_vector(bridge(), s, {0, 0, 0}) == M{{0, 0}, {1, 0}});
  CHECK(stm_from_vector(bridge(), s, {1, 0, 0}) == M{{1, 0}, {1, 0}});
  CHECK(stm_from_vector(bridge(), s, {0, 1, 0}) == M{{0, 1}, {1, 0}});
  CHECK(stm_from_vector(bridge(), s, {1, 1, 0}) == all);
  CHECK(stm_from_vector(bridge(), s, {0, 0, 1}) == M{{0, 0}, {1, 1}});
  CHECK(stm_from_vector(bridge(), s, {1, 0, 1}) == all);
  CHECK(stm_from_vector(bridge(), s, {0, 1, 1}) == all);
  CHECK(stm_from_vector(bridge(), s, {1, 1, 1}) == all);
}

TEST_CASE("stage 3 matrices") {
  const Decomposition d = decompose(bridge());
  const Stage& s = stage(d, 3);
  CHECK(stm_from_vector(bridge(), s, {0, 0}) == M{{0}, {0}});
  CHECK(stm_from_vector(bridge(), s, {1, 0}) == M{{1}, {0}});
  CHECK(stm_from_vector(bridge(), s, {0, 1}) == M{{0}, {1}});
  CHECK(stm_from_vector(bridge(), s, {1, 1}) == M{{1}, {1}});
}

TEST_CASE("aggregated stage tables") {
  const Decomposition d = decompose(bridge());
  const MainBat bat = main_bat_for(d);
  CHECK(bat.width() == 3);

  const WeightedStmSet first = tabulate_stage(bridge(), stage(d, 1), bat);
  CHECK(first.size() == 3);
  CHECK(std::abs(mass_of(first, M{{1, 0}}) - 0.09) < 1e-12);
  CHECK(std::abs(mass_of(first, M{{0, 1}}) - 0.09) < 1e-12);
  CHECK(std::abs(mass_of(first, M{{1, 1}}) - 0.81) < 1e-12);
  CHECK(std::abs(first.discarded_mass() - 0.01) < 1e-12);

  const WeightedStmSet second = tabulate_stage(bridge(), stage(d, 2), bat);
  CHECK(second.size() == 5);
  CHECK(std::abs(mass_of(second, M{{0, 0}, {1, 0}}) - 0.001) < 1e-12);
  CHECK(std::abs(mass_of(second, M{{1, 0}, {1, 0}}) - 0.009) < 1e-12);
  CHECK(std::abs(mass_of(second, M{{0, 1}, {1, 0}}) - 0.009) < 1e-12);
  CHECK(std::abs(mass_of(second, M{{1, 1}, {1, 1}}) - 0.972) < 1e-12);
  CHECK(std::abs(mass_of(second, M{{0, 0}, {1, 1}}) - 0.009) < 1e-12);
  // first-appearance order follows the BAT
  CHECK(second.entries()[0].first == M{{0, 0}, {1, 0}});
  CHECK(second.entries()[3].first == M{{1, 1}, {1, 1}});

  const WeightedStmSet third = tabulate_stage(bridge(), stage(d, 3), bat);
  CHECK(third.size() == 3);
  CHECK(std::abs(mass_of(third, M{{1}, {0}}) - 0.09) < 1e-12);
  CHECK(std::abs(mass_of(third, M{{0}, {1}}) - 0.09) < 1e-12);
  CHECK(std::abs(mass_of(third, M{{1}, {1}}) - 0.81) < 1e-12);
}

TEST_CASE("sub-BAT is a prefix of the main BAT") {
  const MainBat bat(5);
  std::vector<ArcStateVector> main;
  for (const auto& x : bat.sub_bat(5)) main.push_back(x);
  std::size_t i = 0;
  for (const auto& x : bat.sub_bat(3)) {
    REQUIRE(i < main.size());
    CHECK(x.bits() == main[i].bits());
    ++i;
  }
  CHECK(i == 8);
  CHECK_THROWS(bat.sub_bat(6));
}

TEST_CASE("convolution products of the stage 1 and stage 2 tables") {
  const M rows[] = {M{{1, 0}}, M{{0, 1}}, M{{1, 1}}};
  const M stage2[] = {M{{0, 0}, {1, 0}}, M{{1, 0}, {1, 0}}, M{{0, 1}, {1, 0}}, M{{1, 1}, {1, 1}},
                      M{{0, 0}, {1, 1}}};
  // expected products, row by row
  const M expected[3][5] = {
      {M{{0, 0}}, M{{1, 0}}, M{{0, 1}}, M{{1, 1}}, M{{0, 0}}},
      {M{{1, 0}}, M{{1, 0}}, M{{1, 0}}, M{{1, 1}}, M{{1, 1}}},
      {M{{1, 0}}, M{{1, 0}}, M{{1, 1}}, M{{1, 1}}, M{{1, 1}}},
  };
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 5; ++j) {
      CHECK(stm_convolve(rows[i], stage2[j]) == expected[i][j]);
      CHECK(definition_product(rows[i], stage2[j]) == expected[i][j]);
    }
  }
  CHECK_THROWS_AS(stm_convolve(M{{1, 0, 1}}, stage2[0]), StmDimensionError);
}

TEST_CASE("folded set after stage 2") {
  const Decomposition d = decompose(bridge());
  const MainBat bat = main_bat_for(d);
  Counters counters;
  const WeightedStmSet first = tabulate_stage(bridge(), stage(d, 1), bat, &counters);
  const WeightedStmSet second = tabulate_stage(bridge(), stage(d, 2), bat, &counters);
  const WeightedStmSet folded = convolve_sets(first, second, &counters);
  CHECK(folded.size() == 3);
  CHECK(std::abs(mass_of(folded, M{{1, 0}}) - 0.01062) < 1e-12);
  CHECK(std::abs(mass_of(folded, M{{0, 1}}) - 0.00081) < 1e-12);
  CHECK(std::abs(mass_of(folded, M{{1, 1}}) - 0.97767) < 1e-12);
  CHECK(counters.stms_per_stage == std::vector<std::size_t>{3, 5, 3});
  CHECK(counters.convolution_products == 15);

  const WeightedStmSet third = tabulate_stage(bridge(), stage(d, 3), bat);
  const WeightedStmSet last = convolve_sets(folded, third);
  REQUIRE(last.size() == 1);
  CHECK(last.entries()[0].first == M{{1}});
  CHECK(std::abs(last.entries()[0].second - 0.9781803) < 1e-12);
}

TEST_CASE("scalar chain and total disconnection") {
  WeightedStmSet acc;
  acc.add(M{{1}}, 0.5);
  WeightedStmSet next;
  next.add(M{{1}}, 0.25);
  const WeightedStmSet out = convolve_sets(acc, next);
  REQUIRE(out.size() == 1);
  CHECK(out.entries()[0].second == 0.125);

  WeightedStmSet row;
  row.add(M{{1, 0}}, 0.5);
  WeightedStmSet orthogonal;
  orthogonal.add(M{{0, 0}, {1, 1}}, 0.5);
  CHECK(convolve_sets(row, orthogonal).empty());

  WeightedStmSet zero;
  CHECK_FALSE(zero.add(M{{0, 0}}, 0.2));
  CHECK(zero.empty());
  CHECK(zero.discarded_mass() == 0.2);
}

TEST_CASE("convolution is associative and monotone") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 500; ++trial) {
    const int a = 1 + static_cast<int>(rng() % 6);
    const int b = 1 + static_cast<int>(rng() % 6);
    const int c = 1 + static_cast<int>(rng() % 6);
    const int e = 1 + static_cast<int>(rng() % 6);
    const M x = random_matrix(a, b, rng);
    const M y = random_matrix(b, c, rng);
    const M z = random_matrix(c, e, rng);
    CHECK(stm_convolve(stm_convolve(x, y), z) == stm_convolve(x, stm_convolve(y, z)));
    CHECK(stm_convolve(x, y) == definition_product(x, y));

    M raised = x;
    const int r = static_cast<int>(rng() % a);
    const int h = static_cast<int>(rng() % b);
    raised.set(r, h, true);
    const M before = stm_convolve(x, y);
    const M after = stm_convolve(raised, y);
    for (int i = 0; i < a; ++i) {
      for (int j = 0; j < c; ++j) {
        if (before.at(i, j)) CHECK(after.at(i, j));
      }
    }
  }
}

TEST_CASE("stage mass is conserved") {
  for (const auto& c : testing_support::random_cases(100, 3, 8, 3, 14, 41)) {
    const Network net = random_network(c.n, c.m, c.seed);
    const Decomposition d = decompose(net);
    const MainBat bat = main_bat_for(d);
    for (const Stage& s : d.stages) {
      const WeightedStmSet set = tabulate_stage(net, s, bat);
      CHECK(std::abs(set.mass() + set.discarded_mass() - 1.0) < 1e-12);

      // grouping by boundary classes projects onto the same table
      const StageTable classes = tabulate_stage_classes(net, s, bat);
      WeightedStmSet projected;
      for (std::size_t i = 0; i < classes.classes.size(); ++i) {
        projected.add(classes.classes[i].stm, classes.mass[i]);
      }
      REQUIRE(projected.size() == set.size());
      for (const auto& [m, p] : set.entries()) CHECK(std::abs(mass_of(projected, m) - p) < 1e-12);
      CHECK(std::abs(classes.discarded - set.discarded_mass()) < 1e-12);
    }
  }
}
