#include "relengine/generators.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

namespace relengine {

namespace {

// Uniform double in [0, 1) from the top 53 bits; independent of the
// standard library's distribution implementations.
double unit_draw(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

class ArcList {
 public:
  void add(NodeId u, NodeId v) { ends_.emplace_back(u, v); }

  Network build(int nodes, const GeneratorSpec& spec) const {
    std::vector<Arc> arcs;
    std::mt19937_64 rng(spec.seed.value_or(0));
    for (const auto& [u, v] : ends_) {
      double p = spec.uniform_p;
      if (spec.seed) {
        p = std::round(unit_draw(rng) * 1e4) / 1e4;
        p = std::clamp(p, 0.0001, 0.9999);
      }
      arcs.push_back({static_cast<ArcId>(arcs.size() + 1), u, v, p});
    }
    return Network(nodes, std::move(arcs));
  }

 private:
  std::vector<std::pair<NodeId, NodeId>> ends_;
};

}  // namespace

std::string_view to_string(Family family) {
  switch (family) {
    case Family::kSeries: return "series";
    case Family::kLadder: return "ladder";
    case Family::kGrid: return "grid";
    case Family::kBridgeChain: return "bridge-chain";
  }
  return "?";
}

std::optional<Family> parse_family(std::string_view name) {
  for (Family f : {Family::kSeries, Family::kLadder, Family::kGrid, Family::kBridgeChain}) {
    if (to_string(f) == name) return f;
  }
  return std::nullopt;
}

Network generate(const GeneratorSpec& spec) {
  if (spec.k < 1) throw std::invalid_argument("generator size k must be at least 1");
  if (!spec.seed && !(spec.uniform_p >= 0.0 && spec.uniform_p <= 1.0)) {
    throw std::invalid_argument("generator probability must lie in [0, 1]");
  }
  const int k = spec.k;
  ArcList list;
  switch (spec.family) {
    case Family::kSeries:
      for (int i = 1; i <= k; ++i) list.add(i, i + 1);
      return list.build(k + 1, spec);

    case Family::kLadder: {
      // top rail 1..k+1, bottom rail k+2..2k+2
      const int width = k + 1;
      for (int i = 1; i < width; ++i) list.add(i, i + 1);
      for (int i = 1; i < width; ++i) list.add(width + i, width + i + 1);
      for (int i = 1; i <= width; ++i) list.add(i, width + i);
      return list.build(2 * width, spec);
    }

    case Family::kGrid: {
      const int rows = k;
      const int cols = k + 1;
      auto at = [cols](int r, int c) { return r * cols + c + 1; };
      for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
          if (c + 1 < cols) list.add(at(r, c), at(r, c + 1));
          if (r + 1 < rows) list.add(at(r, c), at(r + 1, c));
        }
      }
      return list.build(rows * cols, spec);
    }

    case Family::kBridgeChain:
      for (int j = 0; j < k; ++j) {
        const int o = 4 * j;
        list.add(o + 1, o + 2);
        list.add(o + 1, o + 3);
        list.add(o + 2, o + 3);
        list.add(o + 2, o + 4);
        list.add(o + 3, o + 4);
        list.add(o + 3, o + 5);
        list.add(o + 4, o + 5);
      }
      return list.build(4 * k + 1, spec);
  }
  throw std::invalid_argument("unknown network family");
}

Network bridge_network(double p) {
  return generate({.family = Family::kBridgeChain, .k = 1, .uniform_p = p, .seed = {}});
}

Network random_network(int n, int m, std::uint64_t seed) {
  if (n < 2 || m < n - 1 || m > n * (n - 1) / 2) {
    throw std::invalid_argument("random_network: arc count out of range");
  }
  std::mt19937_64 rng(seed);
  auto below = [&rng](int bound) { return static_cast<int>(rng() % static_cast<std::uint64_t>(bound)); };

  std::vector<std::pair<NodeId, NodeId>> ends;
  std::vector<std::vector<bool>> used(n + 1, std::vector<bool>(n + 1, false));
  auto take = [&](NodeId u, NodeId v) {
    used[u][v] = used[v][u] = true;
    ends.emplace_back(u, v);
  };
  // random spanning tree: each node joins one earlier node of a shuffled order
  std::vector<NodeId> order(n);
  for (int i = 0; i < n; ++i) order[i] = i + 1;
  for (int i = n - 1; i > 0; --i) std::swap(order[i], order[below(i + 1)]);
  for (int i = 1; i < n; ++i) take(order[i], order[below(i)]);

  std::vector<std::pair<NodeId, NodeId>> spare;
  for (NodeId u = 1; u <= n; ++u) {
    for (NodeId v = u + 1; v <= n; ++v) {
      if (!used[u][v]) spare.emplace_back(u, v);
    }
  }
  for (int i = static_cast<int>(spare.size()) - 1; i > 0; --i) std::swap(spare[i], spare[below(i + 1)]);
  for (int i = 0; static_cast<int>(ends.size()) < m; ++i) take(spare[i].first, spare[i].second);

  // arc ids follow a shuffled order so that tree arcs are not always first
  for (int i = m - 1; i > 0; --i) std::swap(ends[i], ends[below(i + 1)]);
  std::vector<Arc> arcs;
  for (const auto& [u, v] : ends) {
    const double p = 0.05 + 0.9 * unit_draw(rng);
    arcs.push_back({static_cast<ArcId>(arcs.size() + 1), std::min(u, v), std::max(u, v), p});
  }
  return Network(n, std::move(arcs));
}

}  // namespace relengine
