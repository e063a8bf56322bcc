#include "relengine/quick_bat.hpp"

#include <algorithm>
#include <stdexcept>

#include "relengine/dsu.hpp"

namespace relengine {

SuperVector::SuperVector(std::initializer_list<int> coordinates)
    : length(static_cast<int>(coordinates.size())) {
  int i = 0;
  for (int c : coordinates) {
    if (c != 0) bits |= std::uint64_t{1} << i;
    ++i;
  }
}

std::string SuperVector::to_string() const {
  std::string out = "(";
  for (int i = 1; i <= length; ++i) {
    if (i > 1) out += ", ";
    out += (*this)[i] ? '1' : '0';
  }
  return out + ")";
}

ArcStateVector first_connected(const Network& network) {
  // The earliest connected vector in BAT order has the smallest integer value,
  // i.e. the path minimizing sum 2^(i-1) over its arcs. Weights 2^i give the
  // same unique optimum.
  ArcStateVector x(network.arc_count());
  for (ArcId id : shortest_path(network, ld_weights(network))) x.set(id, true);
  return x;
}

ArcStateVector last_disconnected(const Network& network) {
  ArcStateVector x = ArcStateVector::all_ones(network.arc_count());
  const NodeId sources[] = {network.source()};
  for (ArcId id : min_cut(network, ld_weights(network), sources)) x.set(id, false);
  return x;
}

namespace {

void require_prefix(const Network& network, const SuperVector& s) {
  if (s.length < 0 || s.length > network.arc_count() || s.length > 64) {
    throw std::invalid_argument("super vector longer than the arc list");
  }
}

}  // namespace

double super_vector_probability(const Network& network, const SuperVector& s) {
  require_prefix(network, s);
  double p = 1.0;
  for (int i = 1; i <= s.length; ++i) {
    const double q = network.arc(i).p;
    p *= s[i] ? q : 1.0 - q;
  }
  return p;
}

bool super_vector_connected(const Network& network, const SuperVector& s) {
  require_prefix(network, s);
  DisjointSets sets(network.node_count() + 1);
  for (int i = 1; i <= s.length; ++i) {
    if (s[i]) sets.unite(network.arc(i).u, network.arc(i).v);
  }
  return sets.same(network.source(), network.sink());
}

double mass_after(const Network& network, std::uint64_t index) {
  const int m = network.arc_count();
  double mass = 0.0;
  double same = 1.0;  // probability that all higher coordinates equal index's
  for (int i = m; i >= 1; --i) {
    const double q = network.arc(i).p;
    if ((index >> (i - 1)) & 1U) {
      same *= q;
    } else {
      mass += same * q;
      same *= 1.0 - q;
    }
  }
  return mass;
}

namespace {

class Traversal {
 public:
  Traversal(const Network& network, const Deadline& deadline, QuickBatCounters& counters,
            QuickBatCover& cover)
      : network_(network),
        m_(network.arc_count()),
        guard_(deadline),
        counters_(counters),
        cover_(cover),
        sets_(network.node_count() + 1) {}

  void run(std::uint64_t begin, std::uint64_t end) {
    begin_ = begin;
    end_ = end;
    if (begin_ < end_) visit(0, 0, 1.0);
  }

 private:
  // Mass of completions t in [0, limit) over arcs a_{k+1}..a_m.
  double completion_mass_below(int k, std::uint64_t limit) {
    const int free = m_ - k;
    if (free < 64 && limit >= (std::uint64_t{1} << free)) return 1.0;
    double mass = 0.0;
    double same = 1.0;
    for (int j = free - 1; j >= 0; --j) {
      const double q = network_.arc(k + 1 + j).p;
      if ((limit >> j) & 1U) {
        mass += same * (1.0 - q);
        same *= q;
        ++counters_.multiplications;
      } else {
        same *= 1.0 - q;
      }
      ++counters_.multiplications;
    }
    return mass;
  }

  bool prefix_connected(int k, std::uint64_t low, bool complete_with_ones) {
    ++counters_.connectivity_checks;
    sets_.reset(network_.node_count() + 1);
    for (int i = 1; i <= m_; ++i) {
      const bool on = i <= k ? ((low >> (i - 1)) & 1U) != 0 : complete_with_ones;
      if (on) sets_.unite(network_.arc(i).u, network_.arc(i).v);
    }
    return sets_.same(network_.source(), network_.sink());
  }

  void visit(int k, std::uint64_t low, double prefix_mass) {
    guard_.tick();
    const int free = m_ - k;
    const std::uint64_t span = free >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << free);
    const std::uint64_t step = std::uint64_t{1} << k;

    // Completions t with begin <= low + t * step < end.
    const std::uint64_t t_begin = begin_ > low ? (begin_ - low + step - 1) >> k : 0;
    std::uint64_t t_end = end_ > low ? (end_ - low + step - 1) >> k : 0;
    if (free < 64) t_end = std::min(t_end, span);
    if (t_begin >= t_end) return;

    ++counters_.visited_prefixes;
    if (prefix_connected(k, low, false)) {
      const bool full = t_begin == 0 && free < 64 && t_end == span;
      const double completions =
          full ? 1.0 : completion_mass_below(k, t_end) - completion_mass_below(k, t_begin);
      const double mass = prefix_mass * completions;
      if (!full) ++counters_.multiplications;
      ++counters_.connected_super_vectors;
      ++counters_.summations;
      cover_.pieces.push_back({SuperVector(k, low), t_begin, t_end, mass});
      return;
    }
    // Appending failed arcs keeps the prefix disconnected, so the children
    // worth visiting end in a functioning arc a_j after a run of failures.
    // Each visited prefix is then a distinct integer, at most 2^m of them.
    double zeros_mass = prefix_mass;
    for (int j = k + 1; j <= m_; ++j) {
      // Every completion is disconnected when even the all-ones one is.
      if (!prefix_connected(j - 1, low, true)) return;
      const double q = network_.arc(j).p;
      counters_.multiplications += 2;
      visit(j, low | (std::uint64_t{1} << (j - 1)), zeros_mass * q);
      zeros_mass *= 1.0 - q;
    }
  }

  const Network& network_;
  const int m_;
  BudgetGuard guard_;
  QuickBatCounters& counters_;
  QuickBatCover& cover_;
  DisjointSets sets_;
  std::uint64_t begin_ = 0;
  std::uint64_t end_ = 0;
};

}  // namespace

QuickBatCover quick_bat_cover(const Network& network, const Deadline& deadline,
                              QuickBatCounters* counters) {
  const int m = network.arc_count();
  if (m > 63) throw std::invalid_argument("quick BAT is limited to 63 arcs");
  QuickBatCounters local;
  QuickBatCover cover;
  cover.first_connected = first_connected(network);
  cover.last_disconnected = last_disconnected(network);

  const std::uint64_t begin = cover.first_connected.bat_index();
  const std::uint64_t end = cover.last_disconnected.bat_index();
  Traversal(network, deadline, local, cover).run(begin, end);
  cover.tail_mass = mass_after(network, end);
  local.multiplications += static_cast<std::uint64_t>(m);
  ++local.summations;
  if (counters) *counters = local;
  return cover;
}

double reliability_quick_bat(const Network& network, const Deadline& deadline,
                             QuickBatCounters* counters) {
  const QuickBatCover cover = quick_bat_cover(network, deadline, counters);
  double reliability = 0.0;
  for (const CoverPiece& piece : cover.pieces) reliability += piece.mass;
  return reliability + cover.tail_mass;
}

}  // namespace relengine
