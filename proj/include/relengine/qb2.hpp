#pragma once

// QB-II: shortest-MC decomposition, per-stage source-target matrix tables and
// the left-to-right convolution fold.
//
// The fold state after stage i is the set of boundary nodes T_i reached from
// node 1 (a 1 x |T_i| STM) together with the grouping of the unreached
// boundary nodes that the arcs of stages 1..i already join. When no two
// unreached nodes are joined, the next state is exactly the max-min product
// of the row with the stage STM; otherwise the grouping is merged with the
// stage's own node grouping, so that paths leaving and re-entering earlier
// stages are still counted.

#include <cstdint>
#include <vector>

#include "relengine/deadline.hpp"
#include "relengine/decomposition.hpp"
#include "relengine/graph.hpp"
#include "relengine/stm.hpp"

namespace relengine {

struct StageMass {
  double kept = 0.0;
  double discarded = 0.0;
};

struct Qb2Result {
  double reliability = 0.0;
  Counters counters;
  std::vector<StageMass> stage_masses;  // one per stage, before folding
  int stage_count = 0;
};

/// Connectivity classes of a stage's boundary nodes (sorted S_i union T_i)
/// under one stage vector: equal labels share a component, labels numbered
/// by first occurrence.
using BoundaryLabels = std::vector<std::uint8_t>;

struct BoundaryLabelsHash {
  std::size_t operator()(const BoundaryLabels& labels) const;
};

struct StageClass {
  BoundaryLabels labels;
  SourceTargetMatrix stm;
};

/// Stage tabulation keyed by boundary grouping. Projecting each class onto
/// its STM and summing reproduces tabulate_stage.
struct StageTable {
  std::vector<StageClass> classes;
  std::vector<double> mass;
  double discarded = 0.0;
};

StageTable tabulate_stage_classes(const Network& network, const Stage& stage, const MainBat& bat,
                                  const Deadline& deadline = {}, Counters* counters = nullptr);

Qb2Result reliability_qb2(const Network& network, const Deadline& deadline = {});
Qb2Result reliability_qb2(const Network& network, const Decomposition& d,
                          const Deadline& deadline = {});

}  // namespace relengine
