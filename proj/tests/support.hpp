#pragma once

// Fixtures and brute-force references shared by the test binaries.

#include <cstdint>
#include <random>
#include <vector>

#include "relengine/dsu.hpp"
#include "relengine/generators.hpp"
#include "relengine/graph.hpp"

namespace testing_support {

using namespace relengine;

inline Network bridge(double p = 0.9) { return bridge_network(p); }

inline const std::vector<double>& table1_probabilities() {
  static const std::vector<double> p{0.98, 0.80, 0.85, 0.95, 0.75, 0.90, 0.88};
  return p;
}

inline Network bridge_table1() { return bridge().with_probabilities(table1_probabilities()); }

// Connectivity of node 1 and n when the arcs in `mask` (bit i-1 = a_i) work.
inline bool connects(const Network& net, std::uint64_t mask) {
  DisjointSets sets(net.node_count() + 1);
  for (const Arc& a : net.arcs()) {
    if ((mask >> (a.id - 1)) & 1U) sets.unite(a.u, a.v);
  }
  return sets.same(net.source(), net.sink());
}

// Reference: direct sum over all 2^m masks, kept separate from the
// library's oracle.
inline double brute_reliability(const Network& net) {
  const int m = net.arc_count();
  double total = 0.0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
    if (!connects(net, mask)) continue;
    double p = 1.0;
    for (const Arc& a : net.arcs()) p *= ((mask >> (a.id - 1)) & 1U) ? a.p : 1.0 - a.p;
    total += p;
  }
  return total;
}

struct RandomCase {
  int n;
  int m;
  std::uint64_t seed;
};

// Seeded corpus with n in [n_lo, n_hi] and m in [m_lo, m_hi] where feasible.
inline std::vector<RandomCase> random_cases(int count, int n_lo, int n_hi, int m_lo, int m_hi,
                                            std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<RandomCase> out;
  while (static_cast<int>(out.size()) < count) {
    const int n = n_lo + static_cast<int>(rng() % static_cast<std::uint64_t>(n_hi - n_lo + 1));
    const int lo = std::max(m_lo, n - 1);
    const int hi = std::min(m_hi, n * (n - 1) / 2);
    if (lo > hi) continue;
    const int m = lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
    out.push_back({n, m, rng()});
  }
  return out;
}

}  // namespace testing_support
