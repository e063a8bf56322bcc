#pragma once

// Splits a network into a chain of stages along a sequence of parallel
// minimum cuts, one per arc of a shortest 1-n path.

#include <string>
#include <vector>

#include "relengine/graph.hpp"

namespace relengine {

struct ShortestMc {
  int path_position = 0;           // i: the cut carries the i-th arc of P*
  ArcId path_arc = 0;
  std::vector<ArcId> arcs;         // C_i, ascending
  std::vector<NodeId> seed_nodes;  // S: nodes forced onto the source side
  std::vector<NodeId> source_nodes;  // nodes gained by the source side at this cut
  std::vector<NodeId> target_nodes;  // nodes left on the sink side
};

struct Stage {
  int index = 0;                      // 1-based
  std::vector<ArcId> arc_ids;         // E_i, ascending; fixes the stage vector order
  std::vector<NodeId> source_nodes;   // S_i, ascending
  std::vector<NodeId> target_nodes;   // T_i, ascending
  std::vector<NodeId> node_ids;       // V(E_i) with S_i and T_i, ascending
};

struct Decomposition {
  std::vector<ArcId> shortest_path;            // P*, walking order
  std::vector<ShortestMc> cuts;                // accepted cuts, in order
  std::vector<std::vector<NodeId>> regions;    // node regions between cuts
  std::vector<Stage> stages;
};

/// Cuts and node regions only; `stages` is left empty.
Decomposition find_shortest_mcs(const Network& network);

/// Assigns interior arcs to their region's stage and every cut to the lighter
/// neighbouring stage, then merges stages left without arcs.
Decomposition self_adjust(const Network& network, Decomposition d);

/// Fills source/target boundaries: T_i = S_{i+1} are the nodes touched both
/// by E_1..E_i (or node 1) and by E_{i+1}..E_eta (or node n).
Decomposition stage_sources_targets(const Network& network, Decomposition d);

/// find_shortest_mcs, self_adjust and stage_sources_targets in sequence.
Decomposition decompose(const Network& network);

std::string explain_decomposition(const Decomposition& d);

}  // namespace relengine
