#pragma once

// Binary-state network model, the network file format, and the weighted
// shortest-path / minimum-cut primitives used by every backend.

#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace relengine {

using NodeId = int;  // 1-based
using ArcId = int;   // 1-based, position in file order

struct Arc {
  ArcId id = 0;
  NodeId u = 0;
  NodeId v = 0;
  double p = 0.0;  // functioning probability

  NodeId other(NodeId x) const { return x == u ? v : u; }
};

struct Incidence {
  NodeId neighbor;
  int arc_index;  // 0-based index into Network::arcs()
};

class NetworkError : public std::runtime_error {
 public:
  enum class Kind {
    kSyntax,
    kNodeRange,
    kLoop,
    kParallelArc,
    kProbabilityRange,
    kDisconnected,
  };

  NetworkError(Kind kind, std::string detail, int line = 0, ArcId arc = 0);

  Kind kind() const { return kind_; }
  /// Offending line of the input file, 0 when not tied to a line.
  int line() const { return line_; }
  /// Offending arc, 0 when the error is not about a single arc.
  ArcId arc() const { return arc_; }
  const std::string& detail() const { return detail_; }

 private:
  Kind kind_;
  int line_;
  ArcId arc_;
  std::string detail_;
};

std::string_view to_string(NetworkError::Kind kind);

/// Undirected network with source node 1 and sink node n. Immutable once
/// constructed; the constructor enforces every structural invariant.
class Network {
 public:
  Network(int node_count, std::vector<Arc> arcs);

  int node_count() const { return node_count_; }
  int arc_count() const { return static_cast<int>(arcs_.size()); }
  NodeId source() const { return 1; }
  NodeId sink() const { return node_count_; }

  std::span<const Arc> arcs() const { return arcs_; }
  const Arc& arc(ArcId id) const { return arcs_.at(static_cast<std::size_t>(id - 1)); }
  std::span<const Incidence> incident(NodeId node) const;

  /// Same topology with the probabilities replaced (one per arc, file order).
  Network with_probabilities(std::span<const double> probabilities) const;

 private:
  int node_count_;
  std::vector<Arc> arcs_;
  std::vector<std::vector<Incidence>> adjacency_;
};

Network parse_network(std::istream& in);
Network parse_network_text(std::string_view text);
Network load_network(const std::string& path);

/// Serializes in the network file format; parse_network reads it back to an
/// identical network.
std::string format_network(const Network& network, std::string_view comment = {});

/// 64-bit FNV-1a over a canonical rendering of the topology and the exact
/// probability bits.
std::uint64_t network_digest(const Network& network);

using BigWeight = boost::multiprecision::cpp_int;

/// One non-negative exact weight per arc in arc order.
struct ArcWeighting {
  std::vector<BigWeight> weights;
};

/// W(a_i) = 2^(m-i).
ArcWeighting fc_weights(const Network& network);
/// W(a_i) = 2^i.
ArcWeighting ld_weights(const Network& network);
ArcWeighting unit_weights(const Network& network);

class UnreachableSink : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Arc ids of a minimum-weight path from node 1 to node n, in walking order.
std::vector<ArcId> shortest_path(const Network& network, const ArcWeighting& weighting);

/// Minimum-weight arc set whose removal separates every node of
/// `separated_sources` from node n. Returned ids are ascending.
std::vector<ArcId> min_cut(const Network& network, const ArcWeighting& weighting,
                           std::span<const NodeId> separated_sources);

struct CutResult {
  std::vector<ArcId> arcs;          // ascending
  std::vector<bool> source_side;    // indexed by node id, [0] unused
  BigWeight weight;
};

/// Minimum cut between two disjoint node sets, each contracted to a single
/// terminal. Solved as a max-flow on the undirected network (Dinic).
CutResult min_cut_between(const Network& network, const ArcWeighting& weighting,
                          std::span<const NodeId> sources, std::span<const NodeId> sinks);

}  // namespace relengine
