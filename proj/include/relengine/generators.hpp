#pragma once

// Synthetic network families for benchmarks and property tests.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "relengine/graph.hpp"

namespace relengine {

enum class Family { kSeries, kLadder, kGrid, kBridgeChain };

std::string_view to_string(Family family);
/// Accepts "series", "ladder", "grid", "bridge-chain".
std::optional<Family> parse_family(std::string_view name);

struct GeneratorSpec {
  Family family = Family::kSeries;
  int k = 1;
  double uniform_p = 0.9;
  /// When set, every arc gets its own probability drawn from this seed and
  /// uniform_p is ignored.
  std::optional<std::uint64_t> seed;
};

/// series:       path 1-2-...-(k+1), k arcs
/// ladder:       two rails of k+1 nodes joined by k+1 rungs; 1 and n sit on
///               opposite corners
/// grid:         k rows by k+1 columns, 1 top-left, n bottom-right
/// bridge-chain: k copies of the 5-node bridge glued sink to source
/// Throws std::invalid_argument for k < 1 or p outside [0, 1].
Network generate(const GeneratorSpec& spec);

/// The 5-node, 7-arc bridge network with every arc at probability p.
Network bridge_network(double p = 0.9);

/// Connected network on n nodes with m arcs (n-1 <= m <= n(n-1)/2) and
/// probabilities in [0.05, 0.95], fully determined by the seed.
Network random_network(int n, int m, std::uint64_t seed);

}  // namespace relengine
