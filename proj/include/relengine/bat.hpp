#pragma once

// Binary-addition-tree state vectors, connectivity, vector probabilities and
// the exhaustive reliability routes (the brute-force oracle and plain BAT).

#include <cstdint>
#include <initializer_list>
#include <iterator>
#include <optional>
#include <stdexcept>
#include <string>

#include "relengine/deadline.hpp"
#include "relengine/graph.hpp"

namespace relengine {

/// Fixed-width arc state vector. Coordinate i (1-based) is the state of the
/// i-th arc; it is stored as bit i-1, so BAT order is integer order.
class ArcStateVector {
 public:
  static constexpr int kMaxWidth = 64;

  ArcStateVector() = default;
  explicit ArcStateVector(int width, std::uint64_t bits = 0);
  ArcStateVector(std::initializer_list<int> coordinates);

  static ArcStateVector all_ones(int width);

  int width() const { return width_; }
  std::uint64_t bits() const { return bits_; }
  /// Number of vectors strictly before this one in BAT order from all-zeros.
  std::uint64_t bat_index() const { return bits_; }

  bool operator[](int i) const { return (bits_ >> (i - 1)) & 1U; }
  void set(int i, bool value);
  int count() const;

  bool operator==(const ArcStateVector&) const = default;

  std::string to_string() const;

 private:
  int width_ = 0;
  std::uint64_t bits_ = 0;
};

/// A <= B coordinate-wise.
bool dominated_by(const ArcStateVector& a, const ArcStateVector& b);
/// A < B: dominated and different.
bool strictly_dominated_by(const ArcStateVector& a, const ArcStateVector& b);
/// A << B: A is obtained after B in the BAT.
bool bat_after(const ArcStateVector& a, const ArcStateVector& b);

/// BAT successor: the first zero coordinate becomes one and every earlier
/// coordinate becomes zero. Empty once the vector is all ones.
std::optional<ArcStateVector> next_vector(const ArcStateVector& x);

/// Input range over BAT vectors from `start` (default all zeros) to all ones.
class BatSequence {
 public:
  class iterator {
   public:
    using iterator_category = std::input_iterator_tag;
    using value_type = ArcStateVector;
    using difference_type = std::ptrdiff_t;
    using pointer = const ArcStateVector*;
    using reference = const ArcStateVector&;

    iterator() = default;
    explicit iterator(std::optional<ArcStateVector> current) : current_(current) {}

    reference operator*() const { return *current_; }
    pointer operator->() const { return &*current_; }
    iterator& operator++() {
      current_ = next_vector(*current_);
      return *this;
    }
    void operator++(int) { ++*this; }
    bool operator==(const iterator& other) const { return current_ == other.current_; }

   private:
    std::optional<ArcStateVector> current_;
  };

  explicit BatSequence(ArcStateVector start) : start_(start) {}
  iterator begin() const { return iterator(start_); }
  iterator end() const { return iterator(); }

 private:
  ArcStateVector start_;
};

BatSequence enumerate_vectors(int width, std::optional<ArcStateVector> start = std::nullopt);

/// True iff node 1 reaches node n through arcs whose coordinate is 1.
bool is_connected(const Network& network, const ArcStateVector& x);

/// Product over arcs of p_i (functioning) or 1 - p_i (failed).
double vector_probability(const Network& network, const ArcStateVector& x);

class OracleCapExceeded : public std::runtime_error {
 public:
  OracleCapExceeded(int arcs, int cap);
  int arcs() const { return arcs_; }
  int cap() const { return cap_; }

 private:
  int arcs_;
  int cap_;
};

inline constexpr int kDefaultOracleCap = 30;

/// Cap from RELENGINE_ORACLE_CAP, falling back to kDefaultOracleCap.
int oracle_cap_from_env();

struct OracleOptions {
  int cap = kDefaultOracleCap;
  Deadline deadline;
};

struct ExhaustiveStats {
  std::uint64_t vectors = 0;
  std::uint64_t connected = 0;
};

/// Exact reliability by summing every connected vector of the full 2^m space.
/// Throws OracleCapExceeded when m exceeds the cap.
double reliability_oracle(const Network& network, const OracleOptions& options = {},
                          ExhaustiveStats* stats = nullptr);

/// Plain BAT: walks the whole tree with the BAT update rule and checks every
/// vector with union-find. Limited to m <= 63.
double reliability_bat(const Network& network, const Deadline& deadline = {},
                       ExhaustiveStats* stats = nullptr);

}  // namespace relengine
