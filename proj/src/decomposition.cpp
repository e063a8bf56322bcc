#include "relengine/decomposition.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

namespace relengine {

namespace {

// Minimum cardinality first, ties broken by the 2^i arc weights so that every
// optimum is unique.
ArcWeighting cardinality_weights(const Network& network) {
  ArcWeighting w = ld_weights(network);
  const BigWeight unit = BigWeight(1) << (network.arc_count() + 1);
  for (BigWeight& x : w.weights) x += unit;
  return w;
}

template <typename Range>
std::string join(const Range& items, const char* prefix = "") {
  std::string out = "{";
  bool first = true;
  for (const auto& x : items) {
    if (!first) out += ", ";
    first = false;
    out += prefix + std::to_string(x);
  }
  return out + "}";
}

std::vector<NodeId> sorted_nodes(const std::set<NodeId>& s) { return {s.begin(), s.end()}; }

}  // namespace

Decomposition find_shortest_mcs(const Network& network) {
  const int n = network.node_count();
  const ArcWeighting weights = cardinality_weights(network);

  Decomposition d;
  d.shortest_path = shortest_path(network, weights);

  // Walk P*: path_nodes[j] is the node reached after j arcs.
  std::vector<NodeId> path_nodes{network.source()};
  for (ArcId id : d.shortest_path) path_nodes.push_back(network.arc(id).other(path_nodes.back()));

  std::vector<bool> settled(static_cast<std::size_t>(n) + 1, false);  // L_{i-1}
  std::set<NodeId> seeds{network.source()};
  const int k = static_cast<int>(d.shortest_path.size());
  for (int i = 1; i <= k; ++i) {
    std::set<NodeId> forced_source(seeds.begin(), seeds.end());
    for (NodeId x = 1; x <= n; ++x) {
      if (settled[x]) forced_source.insert(x);
    }
    for (int j = 0; j < i; ++j) forced_source.insert(path_nodes[static_cast<std::size_t>(j)]);
    std::vector<NodeId> forced_sink(path_nodes.begin() + i, path_nodes.end());
    const bool conflict = std::any_of(forced_sink.begin(), forced_sink.end(),
                                      [&](NodeId x) { return forced_source.count(x) > 0; });
    if (conflict) continue;  // no cut carries exactly this path arc; stages merge

    const std::vector<NodeId> sources(forced_source.begin(), forced_source.end());
    const CutResult cut = min_cut_between(network, weights, sources, forced_sink);

    ShortestMc mc;
    mc.path_position = i;
    mc.path_arc = d.shortest_path[static_cast<std::size_t>(i - 1)];
    mc.arcs = cut.arcs;
    mc.seed_nodes = sorted_nodes(seeds);
    std::set<NodeId> next_seeds;
    for (NodeId x = 1; x <= n; ++x) {
      if (cut.source_side[x] && !settled[x]) mc.source_nodes.push_back(x);
      if (!cut.source_side[x]) mc.target_nodes.push_back(x);
    }
    for (ArcId id : cut.arcs) {
      const Arc& a = network.arc(id);
      next_seeds.insert(cut.source_side[a.u] ? a.v : a.u);
    }
    d.regions.push_back(mc.source_nodes);
    for (NodeId x : mc.source_nodes) settled[x] = true;
    d.cuts.push_back(std::move(mc));
    seeds = std::move(next_seeds);
  }

  std::vector<NodeId> last;
  for (NodeId x = 1; x <= n; ++x) {
    if (!settled[x]) last.push_back(x);
  }
  d.regions.push_back(std::move(last));
  return d;
}

Decomposition self_adjust(const Network& network, Decomposition d) {
  const int n = network.node_count();
  const int eta = static_cast<int>(d.regions.size());
  std::vector<int> region_of(static_cast<std::size_t>(n) + 1, 0);
  for (int r = 0; r < eta; ++r) {
    for (NodeId x : d.regions[static_cast<std::size_t>(r)]) region_of[x] = r;
  }

  std::vector<std::vector<ArcId>> stage_arcs(static_cast<std::size_t>(eta));
  std::vector<std::vector<ArcId>> cut_arcs(static_cast<std::size_t>(std::max(eta - 1, 0)));
  for (const Arc& a : network.arcs()) {
    const int ru = region_of[a.u];
    const int rv = region_of[a.v];
    if (ru == rv) {
      stage_arcs[static_cast<std::size_t>(ru)].push_back(a.id);
    } else if (std::abs(ru - rv) == 1) {
      cut_arcs[static_cast<std::size_t>(std::min(ru, rv))].push_back(a.id);
    } else {
      throw std::logic_error("arc a" + std::to_string(a.id) + " skips a stage");
    }
  }

  auto distance_to_end = [eta](int stage) { return std::min(stage, eta - 1 - stage); };
  for (int c = 0; c + 1 < eta; ++c) {
    const auto left = stage_arcs[static_cast<std::size_t>(c)].size();
    const auto right = stage_arcs[static_cast<std::size_t>(c + 1)].size();
    int target = c;
    if (right < left) {
      target = c + 1;
    } else if (right == left && distance_to_end(c + 1) < distance_to_end(c)) {
      target = c + 1;
    }
    auto& dest = stage_arcs[static_cast<std::size_t>(target)];
    const auto& moved = cut_arcs[static_cast<std::size_t>(c)];
    dest.insert(dest.end(), moved.begin(), moved.end());
  }

  // Stages without arcs fold into their successor (the last into its predecessor).
  std::vector<std::vector<ArcId>> merged;
  std::vector<ArcId> pending;
  for (auto& arcs : stage_arcs) {
    pending.insert(pending.end(), arcs.begin(), arcs.end());
    if (!pending.empty()) {
      merged.push_back(std::move(pending));
      pending.clear();
    }
  }
  if (merged.empty()) merged.emplace_back();

  d.stages.clear();
  for (std::size_t i = 0; i < merged.size(); ++i) {
    Stage s;
    s.index = static_cast<int>(i + 1);
    s.arc_ids = std::move(merged[i]);
    std::sort(s.arc_ids.begin(), s.arc_ids.end());
    d.stages.push_back(std::move(s));
  }
  return d;
}

namespace {

// F_i = (V(E_1..E_i) + {1}) & (V(E_{i+1}..E_eta) + {n}) for i = 0..eta.
std::vector<std::vector<NodeId>> frontiers(const Network& network,
                                           const std::vector<Stage>& stages) {
  const int n = network.node_count();
  const std::size_t eta = stages.size();
  std::vector<std::vector<int>> touched(eta, std::vector<int>(static_cast<std::size_t>(n) + 1, 0));
  for (std::size_t i = 0; i < eta; ++i) {
    for (ArcId id : stages[i].arc_ids) {
      touched[i][network.arc(id).u] = 1;
      touched[i][network.arc(id).v] = 1;
    }
  }
  // first/last stage index touching each node
  std::vector<int> first(static_cast<std::size_t>(n) + 1, static_cast<int>(eta));
  std::vector<int> last(static_cast<std::size_t>(n) + 1, -1);
  for (NodeId x = 1; x <= n; ++x) {
    for (std::size_t i = 0; i < eta; ++i) {
      if (touched[i][x]) {
        first[x] = std::min(first[x], static_cast<int>(i));
        last[x] = static_cast<int>(i);
      }
    }
  }
  first[network.source()] = -1;         // node 1 belongs to every prefix
  last[network.sink()] = static_cast<int>(eta);  // node n belongs to every suffix

  std::vector<std::vector<NodeId>> f(eta + 1);
  for (std::size_t i = 0; i <= eta; ++i) {
    for (NodeId x = 1; x <= n; ++x) {
      // x touches a prefix E_1..E_i and a suffix E_{i+1}..E_eta
      if (first[x] < static_cast<int>(i) && last[x] >= static_cast<int>(i)) f[i].push_back(x);
    }
  }
  return f;
}

}  // namespace

Decomposition stage_sources_targets(const Network& network, Decomposition d) {
  for (;;) {
    const auto f = frontiers(network, d.stages);
    std::size_t empty_at = 0;
    for (std::size_t i = 1; i + 1 < f.size(); ++i) {
      if (f[i].empty()) {
        empty_at = i;
        break;
      }
    }
    if (empty_at == 0) {
      for (std::size_t i = 0; i < d.stages.size(); ++i) {
        Stage& s = d.stages[i];
        s.index = static_cast<int>(i + 1);
        s.source_nodes = f[i];
        s.target_nodes = f[i + 1];
        std::set<NodeId> nodes(s.source_nodes.begin(), s.source_nodes.end());
        nodes.insert(s.target_nodes.begin(), s.target_nodes.end());
        for (ArcId id : s.arc_ids) {
          nodes.insert(network.arc(id).u);
          nodes.insert(network.arc(id).v);
        }
        s.node_ids.assign(nodes.begin(), nodes.end());
      }
      return d;
    }
    // An empty boundary cannot chain; merge the two stages around it.
    Stage& keep = d.stages[empty_at - 1];
    Stage& gone = d.stages[empty_at];
    keep.arc_ids.insert(keep.arc_ids.end(), gone.arc_ids.begin(), gone.arc_ids.end());
    std::sort(keep.arc_ids.begin(), keep.arc_ids.end());
    d.stages.erase(d.stages.begin() + static_cast<std::ptrdiff_t>(empty_at));
  }
}

Decomposition decompose(const Network& network) {
  return stage_sources_targets(network, self_adjust(network, find_shortest_mcs(network)));
}

std::string explain_decomposition(const Decomposition& d) {
  std::ostringstream out;
  out << "shortest path: " << join(d.shortest_path, "a") << '\n';
  out << "cuts: " << d.cuts.size() << '\n';
  for (const ShortestMc& c : d.cuts) {
    out << "  C" << c.path_position << ": path arc a" << c.path_arc << ", arcs "
        << join(c.arcs, "a") << ", S " << join(c.seed_nodes) << ", source side "
        << join(c.source_nodes) << ", sink side " << join(c.target_nodes) << '\n';
  }
  out << "stages: " << d.stages.size() << '\n';
  for (const Stage& s : d.stages) {
    out << "  G" << s.index << ": arcs " << join(s.arc_ids, "a") << ", sources "
        << join(s.source_nodes) << ", targets " << join(s.target_nodes) << ", nodes "
        << join(s.node_ids) << '\n';
  }
  return out.str();
}

}  // namespace relengine
