#pragma once

// Quick BAT: enumeration pruned by the first connected vector, the last
// disconnected vector and connected super vectors.

#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

#include "relengine/bat.hpp"
#include "relengine/deadline.hpp"
#include "relengine/graph.hpp"

namespace relengine {

/// Prefix over arcs a_1..a_k standing for all 2^(m-k) completions.
struct SuperVector {
  int length = 0;
  std::uint64_t bits = 0;  // bit i-1 is the state of a_i

  SuperVector() = default;
  SuperVector(int length, std::uint64_t bits) : length(length), bits(bits) {}
  SuperVector(std::initializer_list<int> coordinates);

  bool operator[](int i) const { return (bits >> (i - 1)) & 1U; }
  std::string to_string() const;
};

ArcStateVector first_connected(const Network& network);
ArcStateVector last_disconnected(const Network& network);

/// Product of the first k arc factors; the completions carry total mass 1.
double super_vector_probability(const Network& network, const SuperVector& s);

/// Connectivity of the prefix with every arc beyond it treated as failed.
bool super_vector_connected(const Network& network, const SuperVector& s);

struct QuickBatCounters {
  std::uint64_t visited_prefixes = 0;
  std::uint64_t connectivity_checks = 0;
  std::uint64_t connected_super_vectors = 0;
  std::uint64_t multiplications = 0;
  std::uint64_t summations = 0;
};

/// One accepted connected super vector, restricted to the completions whose
/// BAT index lies in [index(X_FC), index(X_LD)). Completion t (the integer
/// formed by arcs a_{k+1}..a_m) is covered when t_begin <= t < t_end.
struct CoverPiece {
  SuperVector prefix;
  std::uint64_t t_begin = 0;
  std::uint64_t t_end = 0;
  double mass = 0.0;
};

struct QuickBatCover {
  ArcStateVector first_connected;
  ArcStateVector last_disconnected;
  std::vector<CoverPiece> pieces;
  double tail_mass = 0.0;  // every vector after X_LD
};

/// The disjoint cover of all connected vectors that reliability_quick_bat
/// sums. Limited to m <= 63.
QuickBatCover quick_bat_cover(const Network& network, const Deadline& deadline = {},
                              QuickBatCounters* counters = nullptr);

double reliability_quick_bat(const Network& network, const Deadline& deadline = {},
                             QuickBatCounters* counters = nullptr);

/// Total probability of the vectors with BAT index strictly greater than
/// `index`, computed digit by digit without enumeration.
double mass_after(const Network& network, std::uint64_t index);

}  // namespace relengine
