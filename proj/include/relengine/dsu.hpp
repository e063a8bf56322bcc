#pragma once

#include <numeric>
#include <vector>

namespace relengine {

// Union-find with path halving, reset in O(size) between uses.
class DisjointSets {
 public:
  explicit DisjointSets(int size = 0) { reset(size); }

  void reset(int size) {
    parent_.resize(static_cast<std::size_t>(size));
    std::iota(parent_.begin(), parent_.end(), 0);
  }

  int find(int x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[a < b ? b : a] = a < b ? a : b;
  }

  bool same(int a, int b) { return find(a) == find(b); }

 private:
  std::vector<int> parent_;
};

}  // namespace relengine
