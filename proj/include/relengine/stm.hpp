#pragma once

// Source-target matrices: per-stage boolean connectivity between boundary
// nodes, their aggregated probabilities, and the max-min convolution product.

#include <cstdint>
#include <functional>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "relengine/bat.hpp"
#include "relengine/decomposition.hpp"
#include "relengine/dsu.hpp"
#include "relengine/graph.hpp"

namespace relengine {

/// rows x cols boolean matrix, at most 64 columns; each row is a bitmask.
class SourceTargetMatrix {
 public:
  static constexpr int kMaxCols = 64;

  SourceTargetMatrix() = default;
  SourceTargetMatrix(int rows, int cols);
  SourceTargetMatrix(std::initializer_list<std::initializer_list<int>> rows);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool at(int row, int col) const { return (masks_[row] >> col) & 1U; }
  void set(int row, int col, bool value);
  std::uint64_t row_mask(int row) const { return masks_[row]; }
  bool is_zero() const;

  bool operator==(const SourceTargetMatrix&) const = default;

  std::size_t hash() const;
  /// Rows separated by ';', e.g. "[1 0; 1 0]".
  std::string to_string() const;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<std::uint64_t> masks_;
};

struct StmHash {
  std::size_t operator()(const SourceTargetMatrix& m) const { return m.hash(); }
};

class StmDimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Max-min (OR of ANDs) product. Requires a.cols() == b.rows().
SourceTargetMatrix stm_convolve(const SourceTargetMatrix& a, const SourceTargetMatrix& b);

/// Probability mass aggregated per key, kept in first-insertion order so that
/// every sum over it is reproducible.
template <typename Key, typename Hash = std::hash<Key>>
class AggregatedSet {
 public:
  /// Returns true when the key was already present (one summation).
  bool add(const Key& key, double probability) {
    const auto [it, inserted] = index_.try_emplace(key, entries_.size());
    if (!inserted) {
      entries_[it->second].second += probability;
      return true;
    }
    entries_.emplace_back(key, probability);
    return false;
  }

  void discard(double probability) { discarded_ += probability; }

  const std::vector<std::pair<Key, double>>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  double discarded_mass() const { return discarded_; }

  double mass() const {
    double total = 0.0;
    for (const auto& e : entries_) total += e.second;
    return total;
  }

  const double* find(const Key& key) const {
    const auto it = index_.find(key);
    return it == index_.end() ? nullptr : &entries_[it->second].second;
  }

 private:
  std::vector<std::pair<Key, double>> entries_;
  std::unordered_map<Key, std::size_t, Hash> index_;
  double discarded_ = 0.0;
};

/// Distinct STMs with summed probabilities. All-zero matrices are never
/// stored; their mass is tracked as discarded.
class WeightedStmSet {
 public:
  /// Returns true when the probability was summed into an existing entry.
  bool add(const SourceTargetMatrix& m, double probability);

  const std::vector<std::pair<SourceTargetMatrix, double>>& entries() const {
    return set_.entries();
  }
  std::size_t size() const { return set_.size(); }
  bool empty() const { return set_.empty(); }
  double mass() const { return set_.mass(); }
  double discarded_mass() const { return set_.discarded_mass(); }
  const double* find(const SourceTargetMatrix& m) const { return set_.find(m); }

 private:
  AggregatedSet<SourceTargetMatrix, StmHash> set_;
};

/// Work counters of the STM pipeline.
///   stms_per_stage       sizes of the aggregated sets in creation order:
///                        stage 1, stage 2, fold 2, stage 3, fold 3, ...
///   convolution_products matrix pairs combined
///   multiplications      probability products (g-1 per stage vector of
///                        width g, one per surviving pair)
///   summations           additions into an existing aggregated entry plus
///                        the additions of the final sum
struct Counters {
  std::vector<std::size_t> stms_per_stage;
  std::uint64_t convolution_products = 0;
  std::uint64_t multiplications = 0;
  std::uint64_t summations = 0;
};

/// Every product of an accumulator row with a stage matrix; zero results are
/// dropped, equal results aggregated.
WeightedStmSet convolve_sets(const WeightedStmSet& acc, const WeightedStmSet& stage_set,
                             Counters* counters = nullptr);

/// A stage's arcs relabelled over its own nodes, with the boundary positions.
class StageGraph {
 public:
  StageGraph(const Network& network, const Stage& stage);

  int width() const { return static_cast<int>(arcs_.size()); }
  int local_nodes() const { return static_cast<int>(nodes_.size()); }
  const std::vector<int>& source_positions() const { return sources_; }
  const std::vector<int>& target_positions() const { return targets_; }
  /// Positions of the sorted union of sources and targets.
  const std::vector<int>& boundary_positions() const { return boundary_; }
  const std::vector<NodeId>& boundary_nodes() const { return boundary_nodes_; }

  /// Unions the endpoints of every functioning arc of `x` (stage-local order).
  void connect(const ArcStateVector& x, DisjointSets& sets) const;
  /// Probability of the stage vector; `multiplications` gains width-1.
  double probability(const ArcStateVector& x, std::uint64_t* multiplications = nullptr) const;
  SourceTargetMatrix matrix(DisjointSets& sets) const;

 private:
  std::vector<NodeId> nodes_;
  std::vector<std::pair<int, int>> arcs_;
  std::vector<double> p_;
  std::vector<int> sources_;
  std::vector<int> targets_;
  std::vector<int> boundary_;
  std::vector<NodeId> boundary_nodes_;
};

/// Entry (a, b) is 1 iff S_i[a] and T_i[b] share a component of the stage
/// subgraph under `x`; a node in both lists is connected to itself.
SourceTargetMatrix stm_from_vector(const Network& network, const Stage& stage,
                                   const ArcStateVector& x);

/// The BAT of the widest stage. The sub-BAT of a narrower stage of width k is
/// its first 2^k rows restricted to the first k columns.
class MainBat {
 public:
  explicit MainBat(int width);

  int width() const { return width_; }
  BatSequence sub_bat(int k) const;

 private:
  int width_;
};

MainBat main_bat_for(const Decomposition& d);

/// Aggregated STMs of every stage vector; the zero matrix is discarded.
WeightedStmSet tabulate_stage(const Network& network, const Stage& stage, const MainBat& bat,
                              Counters* counters = nullptr);

}  // namespace relengine
