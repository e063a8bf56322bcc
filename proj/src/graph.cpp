#include "relengine/graph.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <charconv>
#include <cstring>
#include <fstream>
#include <functional>
#include <limits>
#include <queue>
#include <set>
#include <sstream>
#include <utility>

namespace relengine {

NetworkError::NetworkError(Kind kind, std::string detail, int line, ArcId arc)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + detail : detail),
      kind_(kind),
      line_(line),
      arc_(arc),
      detail_(std::move(detail)) {}

std::string_view to_string(NetworkError::Kind kind) {
  switch (kind) {
    case NetworkError::Kind::kSyntax: return "syntax";
    case NetworkError::Kind::kNodeRange: return "node-range";
    case NetworkError::Kind::kLoop: return "loop";
    case NetworkError::Kind::kParallelArc: return "parallel-arc";
    case NetworkError::Kind::kProbabilityRange: return "probability-range";
    case NetworkError::Kind::kDisconnected: return "disconnected";
  }
  return "unknown";
}

Network::Network(int node_count, std::vector<Arc> arcs)
    : node_count_(node_count), arcs_(std::move(arcs)) {
  using Kind = NetworkError::Kind;
  if (node_count_ < 2) {
    throw NetworkError(Kind::kNodeRange, "a network needs at least two nodes");
  }
  adjacency_.assign(static_cast<std::size_t>(node_count_) + 1, {});
  std::set<std::pair<NodeId, NodeId>> seen;
  for (std::size_t i = 0; i < arcs_.size(); ++i) {
    Arc& a = arcs_[i];
    a.id = static_cast<ArcId>(i + 1);
    const std::string tag = "arc a" + std::to_string(a.id);
    if (a.u < 1 || a.u > node_count_ || a.v < 1 || a.v > node_count_) {
      throw NetworkError(Kind::kNodeRange,
                         tag + " references a node outside 1.." + std::to_string(node_count_), 0,
                         a.id);
    }
    if (a.u == a.v) throw NetworkError(Kind::kLoop, tag + " is a loop", 0, a.id);
    if (!(a.p >= 0.0 && a.p <= 1.0)) {
      throw NetworkError(Kind::kProbabilityRange, tag + " probability outside [0,1]", 0, a.id);
    }
    if (!seen.emplace(std::min(a.u, a.v), std::max(a.u, a.v)).second) {
      throw NetworkError(Kind::kParallelArc, tag + " duplicates an earlier arc", 0, a.id);
    }
    adjacency_[a.u].push_back({a.v, static_cast<int>(i)});
    adjacency_[a.v].push_back({a.u, static_cast<int>(i)});
  }

  std::vector<bool> reached(adjacency_.size(), false);
  std::vector<NodeId> stack{1};
  reached[1] = true;
  int count = 1;
  while (!stack.empty()) {
    const NodeId x = stack.back();
    stack.pop_back();
    for (const Incidence& inc : adjacency_[x]) {
      if (!reached[inc.neighbor]) {
        reached[inc.neighbor] = true;
        ++count;
        stack.push_back(inc.neighbor);
      }
    }
  }
  if (count != node_count_) {
    throw NetworkError(Kind::kDisconnected, "network is not connected with all arcs functioning");
  }
}

std::span<const Incidence> Network::incident(NodeId node) const {
  return adjacency_.at(static_cast<std::size_t>(node));
}

Network Network::with_probabilities(std::span<const double> probabilities) const {
  if (probabilities.size() != arcs_.size()) {
    throw std::invalid_argument("probability count does not match arc count");
  }
  std::vector<Arc> arcs = arcs_;
  for (std::size_t i = 0; i < arcs.size(); ++i) arcs[i].p = probabilities[i];
  return Network(node_count_, std::move(arcs));
}

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    const std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

template <typename T>
T parse_number(std::string_view field, int line, const char* what) {
  T value{};
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc{} || ptr != field.data() + field.size()) {
    throw NetworkError(NetworkError::Kind::kSyntax,
                       "expected " + std::string(what) + ", got '" + std::string(field) + "'",
                       line);
  }
  return value;
}

}  // namespace

Network parse_network(std::istream& in) {
  using Kind = NetworkError::Kind;
  int node_count = 0;
  std::vector<Arc> arcs;
  std::vector<int> arc_lines;
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line(raw);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    const auto fields = split_fields(line);
    if (fields.empty() || fields.front().front() == '#') continue;

    if (fields[0] == "nodes") {
      if (node_count != 0) throw NetworkError(Kind::kSyntax, "duplicate 'nodes' line", line_no);
      if (fields.size() != 2) throw NetworkError(Kind::kSyntax, "usage: nodes <n>", line_no);
      node_count = parse_number<int>(fields[1], line_no, "a node count");
      if (node_count < 2) {
        throw NetworkError(Kind::kNodeRange, "node count must be at least 2", line_no);
      }
    } else if (fields[0] == "arc") {
      if (node_count == 0) {
        throw NetworkError(Kind::kSyntax, "'nodes' must be the first directive", line_no);
      }
      if (fields.size() != 4) throw NetworkError(Kind::kSyntax, "usage: arc <u> <v> <p>", line_no);
      Arc a;
      a.u = parse_number<int>(fields[1], line_no, "a node id");
      a.v = parse_number<int>(fields[2], line_no, "a node id");
      a.p = parse_number<double>(fields[3], line_no, "a probability");
      arcs.push_back(a);
      arc_lines.push_back(line_no);
    } else {
      throw NetworkError(Kind::kSyntax, "unknown directive '" + std::string(fields[0]) + "'",
                         line_no);
    }
  }
  if (node_count == 0) throw NetworkError(Kind::kSyntax, "missing 'nodes' line");

  try {
    return Network(node_count, std::move(arcs));
  } catch (const NetworkError& e) {
    if (e.arc() >= 1 && e.arc() <= static_cast<int>(arc_lines.size())) {
      throw NetworkError(e.kind(), e.detail(), arc_lines[static_cast<std::size_t>(e.arc() - 1)],
                         e.arc());
    }
    throw;
  }
}

Network parse_network_text(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_network(in);
}

Network load_network(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  return parse_network(in);
}

namespace {

std::string format_probability(double p) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, p);
  (void)ec;
  return std::string(buf, ptr);
}

}  // namespace

std::string format_network(const Network& network, std::string_view comment) {
  std::ostringstream out;
  if (!comment.empty()) out << "# " << comment << '\n';
  out << "nodes " << network.node_count() << '\n';
  for (const Arc& a : network.arcs()) {
    out << "arc " << a.u << ' ' << a.v << ' ' << format_probability(a.p) << '\n';
  }
  return out.str();
}

std::uint64_t network_digest(const Network& network) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](std::uint64_t word) {
    for (int i = 0; i < 8; ++i) {
      h ^= (word >> (8 * i)) & 0xffU;
      h *= 0x100000001b3ULL;
    }
  };
  mix(static_cast<std::uint64_t>(network.node_count()));
  mix(static_cast<std::uint64_t>(network.arc_count()));
  for (const Arc& a : network.arcs()) {
    mix(static_cast<std::uint64_t>(a.u));
    mix(static_cast<std::uint64_t>(a.v));
    mix(std::bit_cast<std::uint64_t>(a.p));
  }
  return h;
}

ArcWeighting fc_weights(const Network& network) {
  const int m = network.arc_count();
  ArcWeighting w;
  w.weights.reserve(static_cast<std::size_t>(m));
  for (int i = 1; i <= m; ++i) w.weights.push_back(BigWeight(1) << (m - i));
  return w;
}

ArcWeighting ld_weights(const Network& network) {
  const int m = network.arc_count();
  ArcWeighting w;
  w.weights.reserve(static_cast<std::size_t>(m));
  for (int i = 1; i <= m; ++i) w.weights.push_back(BigWeight(1) << i);
  return w;
}

ArcWeighting unit_weights(const Network& network) {
  return ArcWeighting{std::vector<BigWeight>(static_cast<std::size_t>(network.arc_count()), 1)};
}

namespace {

void require_weighting(const Network& network, const ArcWeighting& weighting) {
  if (weighting.weights.size() != static_cast<std::size_t>(network.arc_count())) {
    throw std::invalid_argument("weighting length does not match arc count");
  }
  for (const BigWeight& w : weighting.weights) {
    if (w < 0) throw std::invalid_argument("negative arc weight");
  }
}

}  // namespace

std::vector<ArcId> shortest_path(const Network& network, const ArcWeighting& weighting) {
  require_weighting(network, weighting);
  const int n = network.node_count();
  std::vector<BigWeight> dist(static_cast<std::size_t>(n) + 1);
  std::vector<bool> known(static_cast<std::size_t>(n) + 1, false);
  std::vector<bool> done(static_cast<std::size_t>(n) + 1, false);
  std::vector<int> via(static_cast<std::size_t>(n) + 1, -1);

  using Entry = std::pair<BigWeight, NodeId>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> frontier;
  dist[1] = 0;
  known[1] = true;
  frontier.emplace(0, 1);
  while (!frontier.empty()) {
    const auto [d, x] = frontier.top();
    frontier.pop();
    if (done[x]) continue;
    done[x] = true;
    if (x == n) break;
    for (const Incidence& inc : network.incident(x)) {
      const BigWeight candidate = d + weighting.weights[static_cast<std::size_t>(inc.arc_index)];
      if (!known[inc.neighbor] || candidate < dist[inc.neighbor]) {
        known[inc.neighbor] = true;
        dist[inc.neighbor] = candidate;
        via[inc.neighbor] = inc.arc_index;
        frontier.emplace(candidate, inc.neighbor);
      }
    }
  }
  if (!done[n]) throw UnreachableSink("sink is unreachable from the source");

  std::vector<ArcId> path;
  for (NodeId x = n; x != 1;) {
    const Arc& a = network.arcs()[static_cast<std::size_t>(via[x])];
    path.push_back(a.id);
    x = a.other(x);
  }
  std::reverse(path.begin(), path.end());
  return path;
}

namespace {

// Dinic over exact integer capacities. Each undirected arc becomes a pair of
// opposite residual edges with the arc weight as capacity.
class Dinic {
 public:
  explicit Dinic(int vertices) : graph_(static_cast<std::size_t>(vertices)) {}

  void add_undirected(int a, int b, const BigWeight& cap) {
    graph_[a].push_back({b, static_cast<int>(graph_[b].size()), cap});
    graph_[b].push_back({a, static_cast<int>(graph_[a].size()) - 1, cap});
  }

  void add_directed(int a, int b, const BigWeight& cap) {
    graph_[a].push_back({b, static_cast<int>(graph_[b].size()), cap});
    graph_[b].push_back({a, static_cast<int>(graph_[a].size()) - 1, 0});
  }

  BigWeight max_flow(int s, int t) {
    BigWeight flow = 0;
    while (build_levels(s, t)) {
      cursor_.assign(graph_.size(), 0);
      for (;;) {
        BigWeight pushed = push(s, t, BigWeight(-1));
        if (pushed == 0) break;
        flow += pushed;
      }
    }
    return flow;
  }

  std::vector<bool> residual_reachable(int s) const {
    std::vector<bool> seen(graph_.size(), false);
    std::vector<int> stack{s};
    seen[static_cast<std::size_t>(s)] = true;
    while (!stack.empty()) {
      const int x = stack.back();
      stack.pop_back();
      for (const Edge& e : graph_[x]) {
        if (e.cap > 0 && !seen[e.to]) {
          seen[e.to] = true;
          stack.push_back(e.to);
        }
      }
    }
    return seen;
  }

 private:
  struct Edge {
    int to;
    int rev;
    BigWeight cap;
  };

  bool build_levels(int s, int t) {
    level_.assign(graph_.size(), -1);
    std::queue<int> q;
    level_[s] = 0;
    q.push(s);
    while (!q.empty()) {
      const int x = q.front();
      q.pop();
      for (const Edge& e : graph_[x]) {
        if (e.cap > 0 && level_[e.to] < 0) {
          level_[e.to] = level_[x] + 1;
          q.push(e.to);
        }
      }
    }
    return level_[t] >= 0;
  }

  // limit < 0 means unbounded.
  BigWeight push(int x, int t, const BigWeight& limit) {
    if (x == t) return limit;
    for (std::size_t& i = cursor_[x]; i < graph_[x].size(); ++i) {
      Edge& e = graph_[x][i];
      if (e.cap <= 0 || level_[e.to] != level_[x] + 1) continue;
      const BigWeight next_limit = (limit < 0 || e.cap < limit) ? e.cap : limit;
      BigWeight got = push(e.to, t, next_limit);
      if (got > 0) {
        e.cap -= got;
        graph_[e.to][static_cast<std::size_t>(e.rev)].cap += got;
        return got;
      }
    }
    return 0;
  }

  std::vector<std::vector<Edge>> graph_;
  std::vector<int> level_;
  std::vector<std::size_t> cursor_;
};

}  // namespace

CutResult min_cut_between(const Network& network, const ArcWeighting& weighting,
                          std::span<const NodeId> sources, std::span<const NodeId> sinks) {
  require_weighting(network, weighting);
  const int n = network.node_count();
  if (sources.empty() || sinks.empty()) throw std::invalid_argument("empty terminal set");
  std::vector<int> role(static_cast<std::size_t>(n) + 1, 0);
  for (NodeId s : sources) {
    if (s < 1 || s > n) throw std::invalid_argument("source node out of range");
    role[s] = 1;
  }
  for (NodeId t : sinks) {
    if (t < 1 || t > n) throw std::invalid_argument("sink node out of range");
    if (role[t] == 1) throw std::invalid_argument("source and sink sets overlap");
    role[t] = 2;
  }

  // Vertices 1..n are network nodes; 0 is the super-source, n+1 the super-sink.
  BigWeight infinite = 1;
  for (const BigWeight& w : weighting.weights) infinite += w;
  Dinic flow(n + 2);
  for (const Arc& a : network.arcs()) {
    flow.add_undirected(a.u, a.v, weighting.weights[static_cast<std::size_t>(a.id - 1)]);
  }
  for (NodeId s : sources) flow.add_directed(0, s, infinite);
  for (NodeId t : sinks) flow.add_directed(t, n + 1, infinite);

  CutResult result;
  result.weight = flow.max_flow(0, n + 1);
  const std::vector<bool> reach = flow.residual_reachable(0);
  result.source_side.assign(static_cast<std::size_t>(n) + 1, false);
  for (NodeId x = 1; x <= n; ++x) result.source_side[x] = reach[x];
  for (const Arc& a : network.arcs()) {
    if (reach[a.u] != reach[a.v]) result.arcs.push_back(a.id);
  }
  return result;
}

std::vector<ArcId> min_cut(const Network& network, const ArcWeighting& weighting,
                           std::span<const NodeId> separated_sources) {
  const NodeId sink = network.sink();
  if (std::find(separated_sources.begin(), separated_sources.end(), sink) !=
      separated_sources.end()) {
    throw std::invalid_argument("separated sources must exclude the sink");
  }
  const NodeId sinks[] = {sink};
  return min_cut_between(network, weighting, separated_sources, sinks).arcs;
}

}  // namespace relengine
