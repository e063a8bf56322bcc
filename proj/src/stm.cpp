#include "relengine/stm.hpp"

#include <algorithm>
#include <bit>

namespace relengine {

SourceTargetMatrix::SourceTargetMatrix(int rows, int cols)
    : rows_(rows), cols_(cols), masks_(static_cast<std::size_t>(std::max(rows, 0)), 0) {
  if (rows < 0 || cols < 0 || cols > kMaxCols) {
    throw std::invalid_argument("source-target matrix dimensions out of range");
  }
}

SourceTargetMatrix::SourceTargetMatrix(std::initializer_list<std::initializer_list<int>> rows)
    : SourceTargetMatrix(static_cast<int>(rows.size()),
                         rows.size() == 0 ? 0 : static_cast<int>(rows.begin()->size())) {
  int r = 0;
  for (const auto& row : rows) {
    if (static_cast<int>(row.size()) != cols_) throw std::invalid_argument("ragged matrix");
    int c = 0;
    for (int v : row) set(r, c++, v != 0);
    ++r;
  }
}

void SourceTargetMatrix::set(int row, int col, bool value) {
  if (row < 0 || row >= rows_ || col < 0 || col >= cols_) {
    throw std::out_of_range("matrix index out of range");
  }
  const std::uint64_t bit = std::uint64_t{1} << col;
  masks_[static_cast<std::size_t>(row)] =
      value ? (masks_[static_cast<std::size_t>(row)] | bit)
            : (masks_[static_cast<std::size_t>(row)] & ~bit);
}

bool SourceTargetMatrix::is_zero() const {
  return std::all_of(masks_.begin(), masks_.end(), [](std::uint64_t m) { return m == 0; });
}

std::size_t SourceTargetMatrix::hash() const {
  std::uint64_t h = (static_cast<std::uint64_t>(rows_) << 32) ^ static_cast<std::uint64_t>(cols_);
  for (std::uint64_t m : masks_) {
    h ^= m + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return static_cast<std::size_t>(h);
}

std::string SourceTargetMatrix::to_string() const {
  std::string out = "[";
  for (int r = 0; r < rows_; ++r) {
    if (r > 0) out += "; ";
    for (int c = 0; c < cols_; ++c) {
      if (c > 0) out += ' ';
      out += at(r, c) ? '1' : '0';
    }
  }
  return out + "]";
}

SourceTargetMatrix stm_convolve(const SourceTargetMatrix& a, const SourceTargetMatrix& b) {
  if (a.cols() != b.rows()) {
    throw StmDimensionError("cannot convolve " + std::to_string(a.rows()) + "x" +
                            std::to_string(a.cols()) + " with " + std::to_string(b.rows()) + "x" +
                            std::to_string(b.cols()));
  }
  SourceTargetMatrix out(a.rows(), b.cols());
  for (int r = 0; r < a.rows(); ++r) {
    std::uint64_t acc = 0;
    std::uint64_t through = a.row_mask(r);
    while (through != 0) {
      const int h = std::countr_zero(through);
      through &= through - 1;
      acc |= b.row_mask(h);
    }
    for (int c = 0; c < b.cols(); ++c) {
      if ((acc >> c) & 1U) out.set(r, c, true);
    }
  }
  return out;
}

bool WeightedStmSet::add(const SourceTargetMatrix& m, double probability) {
  if (m.is_zero()) {
    set_.discard(probability);
    return false;
  }
  return set_.add(m, probability);
}

WeightedStmSet convolve_sets(const WeightedStmSet& acc, const WeightedStmSet& stage_set,
                             Counters* counters) {
  Counters local;
  WeightedStmSet out;
  for (const auto& [row, p_row] : acc.entries()) {
    for (const auto& [m, p_m] : stage_set.entries()) {
      ++local.convolution_products;
      const SourceTargetMatrix product = stm_convolve(row, m);
      if (product.is_zero()) continue;
      ++local.multiplications;
      if (out.add(product, p_row * p_m)) ++local.summations;
    }
  }
  if (counters) {
    counters->convolution_products += local.convolution_products;
    counters->multiplications += local.multiplications;
    counters->summations += local.summations;
    counters->stms_per_stage.push_back(out.size());
  }
  return out;
}

StageGraph::StageGraph(const Network& network, const Stage& stage) {
  nodes_ = stage.node_ids;
  auto position = [this](NodeId x) {
    const auto it = std::lower_bound(nodes_.begin(), nodes_.end(), x);
    if (it == nodes_.end() || *it != x) throw std::logic_error("node outside its stage");
    return static_cast<int>(it - nodes_.begin());
  };
  for (ArcId id : stage.arc_ids) {
    const Arc& a = network.arc(id);
    arcs_.emplace_back(position(a.u), position(a.v));
    p_.push_back(a.p);
  }
  for (NodeId x : stage.source_nodes) sources_.push_back(position(x));
  for (NodeId x : stage.target_nodes) targets_.push_back(position(x));
  std::vector<NodeId> both = stage.source_nodes;
  both.insert(both.end(), stage.target_nodes.begin(), stage.target_nodes.end());
  std::sort(both.begin(), both.end());
  both.erase(std::unique(both.begin(), both.end()), both.end());
  boundary_nodes_ = both;
  for (NodeId x : both) boundary_.push_back(position(x));
  if (sources_.size() > 64 || targets_.size() > 64 || boundary_.size() > 255) {
    throw std::length_error("stage boundary too large");
  }
}

void StageGraph::connect(const ArcStateVector& x, DisjointSets& sets) const {
  sets.reset(local_nodes());
  for (int i = 0; i < width(); ++i) {
    if (x[i + 1]) sets.unite(arcs_[static_cast<std::size_t>(i)].first,
                             arcs_[static_cast<std::size_t>(i)].second);
  }
}

double StageGraph::probability(const ArcStateVector& x, std::uint64_t* multiplications) const {
  double p = 1.0;
  for (int i = 0; i < width(); ++i) {
    const double q = p_[static_cast<std::size_t>(i)];
    p *= x[i + 1] ? q : 1.0 - q;
  }
  if (multiplications && width() > 1) *multiplications += static_cast<std::uint64_t>(width() - 1);
  return p;
}

SourceTargetMatrix StageGraph::matrix(DisjointSets& sets) const {
  SourceTargetMatrix m(static_cast<int>(sources_.size()), static_cast<int>(targets_.size()));
  for (std::size_t a = 0; a < sources_.size(); ++a) {
    for (std::size_t b = 0; b < targets_.size(); ++b) {
      if (sets.same(sources_[a], targets_[b])) {
        m.set(static_cast<int>(a), static_cast<int>(b), true);
      }
    }
  }
  return m;
}

SourceTargetMatrix stm_from_vector(const Network& network, const Stage& stage,
                                   const ArcStateVector& x) {
  const StageGraph graph(network, stage);
  if (x.width() != graph.width()) throw std::invalid_argument("stage vector width mismatch");
  DisjointSets sets;
  graph.connect(x, sets);
  return graph.matrix(sets);
}

MainBat::MainBat(int width) : width_(width) {
  if (width < 0 || width > 63) throw std::invalid_argument("main BAT width must be in [0, 63]");
}

BatSequence MainBat::sub_bat(int k) const {
  if (k < 0 || k > width_) throw std::invalid_argument("sub-BAT wider than the main BAT");
  // Rows 1..2^k of the main BAT agree with the k-wide BAT on their first k
  // columns and are zero beyond, so the k-wide enumeration is that prefix.
  return enumerate_vectors(k);
}

MainBat main_bat_for(const Decomposition& d) {
  std::size_t widest = 0;
  for (const Stage& s : d.stages) widest = std::max(widest, s.arc_ids.size());
  return MainBat(static_cast<int>(widest));
}

WeightedStmSet tabulate_stage(const Network& network, const Stage& stage, const MainBat& bat,
                              Counters* counters) {
  const StageGraph graph(network, stage);
  DisjointSets sets;
  WeightedStmSet out;
  std::uint64_t multiplications = 0;
  std::uint64_t summations = 0;
  for (const ArcStateVector& x : bat.sub_bat(graph.width())) {
    graph.connect(x, sets);
    if (out.add(graph.matrix(sets), graph.probability(x, &multiplications))) ++summations;
  }
  if (counters) {
    counters->multiplications += multiplications;
    counters->summations += summations;
    counters->stms_per_stage.push_back(out.size());
  }
  return out;
}

}  // namespace relengine
