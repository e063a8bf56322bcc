#include "relengine/qb2.hpp"

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <unordered_map>

#include "relengine/dsu.hpp"

namespace relengine {

std::size_t BoundaryLabelsHash::operator()(const BoundaryLabels& labels) const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (std::uint8_t b : labels) {
    h ^= b;
    h *= 0x100000001b3ULL;
  }
  return static_cast<std::size_t>(h);
}

namespace {

// Canonical first-occurrence labels of `roots`.
BoundaryLabels canonical(const std::vector<int>& roots, int first_label = 0) {
  BoundaryLabels labels(roots.size());
  std::vector<std::pair<int, std::uint8_t>> seen;
  std::uint8_t next = static_cast<std::uint8_t>(first_label);
  for (std::size_t i = 0; i < roots.size(); ++i) {
    const auto it = std::find_if(seen.begin(), seen.end(),
                                 [&](const auto& e) { return e.first == roots[i]; });
    if (it != seen.end()) {
      labels[i] = it->second;
    } else {
      seen.emplace_back(roots[i], next);
      labels[i] = next++;
    }
  }
  return labels;
}

// Fold state over a frontier: label 0 marks nodes reached from node 1, other
// labels group unreached nodes joined by earlier arcs.
struct FrontierHash {
  std::size_t operator()(const BoundaryLabels& labels) const {
    return BoundaryLabelsHash{}(labels);
  }
};

SourceTargetMatrix reached_row(const BoundaryLabels& frontier) {
  SourceTargetMatrix row(1, static_cast<int>(frontier.size()));
  for (std::size_t i = 0; i < frontier.size(); ++i) {
    if (frontier[i] == 0) row.set(0, static_cast<int>(i), true);
  }
  return row;
}

// True when no two unreached nodes share a label.
bool unlinked(const BoundaryLabels& frontier) {
  std::uint8_t expected = 1;
  for (std::uint8_t label : frontier) {
    if (label == 0) continue;
    if (label != expected) return false;
    ++expected;
  }
  return true;
}

// Index of each node of `subset` inside the sorted list `all`.
std::vector<int> positions_in(const std::vector<NodeId>& subset, const std::vector<NodeId>& all) {
  std::vector<int> out;
  out.reserve(subset.size());
  for (NodeId x : subset) {
    const auto it = std::lower_bound(all.begin(), all.end(), x);
    out.push_back(static_cast<int>(it - all.begin()));
  }
  return out;
}

class Folder {
 public:
  explicit Folder(const Stage& stage) {
    std::vector<NodeId> boundary = stage.source_nodes;
    boundary.insert(boundary.end(), stage.target_nodes.begin(), stage.target_nodes.end());
    std::sort(boundary.begin(), boundary.end());
    boundary.erase(std::unique(boundary.begin(), boundary.end()), boundary.end());
    source_at_ = positions_in(stage.source_nodes, boundary);
    target_at_ = positions_in(stage.target_nodes, boundary);
    boundary_size_ = static_cast<int>(boundary.size());
  }

  // Next frontier labels, or empty when node 1 reaches no target.
  BoundaryLabels fold(const BoundaryLabels& frontier, bool frontier_unlinked,
                      const StageClass& cls) {
    if (frontier_unlinked) {
      const SourceTargetMatrix row = stm_convolve(reached_row(frontier), cls.stm);
      if (row.is_zero()) return {};
      // Targets not reached keep the stage's own grouping.
      std::vector<int> roots(target_at_.size());
      for (std::size_t b = 0; b < target_at_.size(); ++b) {
        roots[b] = row.at(0, static_cast<int>(b)) ? -1 : cls.labels[target_at_[b]];
      }
      return relabel(roots);
    }

    sets_.reset(boundary_size_ + 1);
    const int reached = boundary_size_;  // extra element standing for node 1's side
    for (int i = 0; i < boundary_size_; ++i) {
      for (int j = 0; j < i; ++j) {
        if (cls.labels[i] == cls.labels[j]) {
          sets_.unite(i, j);
          break;
        }
      }
    }
    for (std::size_t a = 0; a < source_at_.size(); ++a) {
      if (frontier[a] == 0) {
        sets_.unite(source_at_[a], reached);
        continue;
      }
      for (std::size_t b = 0; b < a; ++b) {
        if (frontier[b] == frontier[a]) {
          sets_.unite(source_at_[a], source_at_[b]);
          break;
        }
      }
    }
    std::vector<int> roots(target_at_.size());
    bool any = false;
    for (std::size_t b = 0; b < target_at_.size(); ++b) {
      const bool hit = sets_.same(target_at_[b], reached);
      any = any || hit;
      roots[b] = hit ? -1 : sets_.find(target_at_[b]);
    }
    if (!any) return {};
    return relabel(roots);
  }

 private:
  // -1 means reached (label 0); other roots are numbered from 1.
  static BoundaryLabels relabel(const std::vector<int>& roots) {
    BoundaryLabels out(roots.size(), 0);
    std::vector<int> seen;
    for (std::size_t i = 0; i < roots.size(); ++i) {
      if (roots[i] < 0) continue;
      auto it = std::find(seen.begin(), seen.end(), roots[i]);
      if (it == seen.end()) {
        seen.push_back(roots[i]);
        it = seen.end() - 1;
      }
      out[i] = static_cast<std::uint8_t>(1 + (it - seen.begin()));
    }
    return out;
  }

  std::vector<int> source_at_;
  std::vector<int> target_at_;
  int boundary_size_ = 0;
  DisjointSets sets_;
};

}  // namespace

StageTable tabulate_stage_classes(const Network& network, const Stage& stage, const MainBat& bat,
                                  const Deadline& deadline, Counters* counters) {
  const StageGraph graph(network, stage);
  BudgetGuard guard(deadline);
  DisjointSets sets;
  StageTable table;
  std::unordered_map<BoundaryLabels, std::size_t, BoundaryLabelsHash> index;
  std::uint64_t multiplications = 0;
  std::uint64_t summations = 0;
  std::vector<int> roots(graph.boundary_positions().size());
  for (const ArcStateVector& x : bat.sub_bat(graph.width())) {
    guard.tick();
    graph.connect(x, sets);
    const double p = graph.probability(x, &multiplications);
    for (std::size_t i = 0; i < roots.size(); ++i) roots[i] = sets.find(graph.boundary_positions()[i]);
    BoundaryLabels labels = canonical(roots);
    const auto [it, inserted] = index.try_emplace(labels, table.classes.size());
    if (inserted) {
      SourceTargetMatrix stm = graph.matrix(sets);
      if (stm.is_zero()) {
        // Zero STMs are remembered so that later hits skip the matrix build.
        it->second = SIZE_MAX;
        table.discarded += p;
        continue;
      }
      table.classes.push_back({std::move(labels), std::move(stm)});
      table.mass.push_back(p);
    } else if (it->second == SIZE_MAX) {
      table.discarded += p;
    } else {
      table.mass[it->second] += p;
      ++summations;
    }
  }
  if (counters) {
    counters->multiplications += multiplications;
    counters->summations += summations;
    counters->stms_per_stage.push_back(table.classes.size());
  }
  return table;
}

Qb2Result reliability_qb2(const Network& network, const Deadline& deadline) {
  return reliability_qb2(network, decompose(network), deadline);
}

Qb2Result reliability_qb2(const Network& network, const Decomposition& d,
                          const Deadline& deadline) {
  if (d.stages.empty()) throw std::invalid_argument("decomposition has no stages");
  const MainBat bat = main_bat_for(d);
  BudgetGuard guard(deadline);
  Qb2Result result;
  result.stage_count = static_cast<int>(d.stages.size());

  AggregatedSet<BoundaryLabels, FrontierHash> frontier;
  for (std::size_t i = 0; i < d.stages.size(); ++i) {
    const Stage& stage = d.stages[i];
    const StageTable table = tabulate_stage_classes(network, stage, bat, deadline, &result.counters);
    double kept = 0.0;
    for (double p : table.mass) kept += p;
    result.stage_masses.push_back({kept, table.discarded});

    Folder folder(stage);
    if (i == 0) {
      // S_1 = {1}, so the start state is node 1 alone, reached.
      const BoundaryLabels start{0};
      for (std::size_t c = 0; c < table.classes.size(); ++c) {
        BoundaryLabels out = folder.fold(start, true, table.classes[c]);
        if (!out.empty()) frontier.add(out, table.mass[c]);
      }
      continue;
    }

    AggregatedSet<BoundaryLabels, FrontierHash> next;
    for (const auto& [state, p_state] : frontier.entries()) {
      const bool plain = unlinked(state);
      for (std::size_t c = 0; c < table.classes.size(); ++c) {
        guard.tick();
        ++result.counters.convolution_products;
        BoundaryLabels out = folder.fold(state, plain, table.classes[c]);
        if (out.empty()) continue;
        ++result.counters.multiplications;
        if (next.add(out, p_state * table.mass[c])) ++result.counters.summations;
      }
    }
    frontier = std::move(next);
    result.counters.stms_per_stage.push_back(frontier.size());
  }

  double reliability = 0.0;
  for (const auto& [state, p] : frontier.entries()) {
    reliability += p;
    ++result.counters.summations;
  }
  result.reliability = reliability;
  return result;
}

}  // namespace relengine
