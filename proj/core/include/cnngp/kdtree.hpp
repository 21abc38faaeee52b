#pragma once

#include <cstdint>
#include <vector>

#include "cnngp/linalg.hpp"

namespace cnngp {

struct NeighborCandidate {
  double dist2;
  Index index;

  /// Closer first; ties resolved by the smaller index.
  friend bool operator<(const NeighborCandidate& a, const NeighborCandidate& b) {
    return a.dist2 < b.dist2 || (a.dist2 == b.dist2 && a.index < b.index);
  }
};

/// Exact k-nearest-neighbor index over a fixed point set (rows of an n x d
/// matrix). Immutable after construction and safe to query concurrently.
class KdTree {
 public:
  explicit KdTree(const Matrix& points, Index leaf_size = 16);

  Index size() const { return n_; }
  Index dim() const { return dim_; }

  /// The k nearest points among those with index < limit, sorted by
  /// (distance, index). Fewer than k are returned if fewer qualify.
  void knn(const double* query, Index k, Index limit, std::vector<NeighborCandidate>& out) const;

 private:
  struct Node {
    Index begin, end;   // range into perm_
    Index left = -1, right = -1;
    int split_dim = 0;
    double split_value = 0.0;
    Index min_index = 0;
  };

  Index build(Index begin, Index end, Index leaf_size);
  void search(Index node, const double* query, Index k, Index limit,
              std::vector<NeighborCandidate>& heap) const;

  Index n_ = 0;
  Index dim_ = 0;
  std::vector<double> coords_;  // row-major copy
  std::vector<Index> perm_;
  std::vector<Node> nodes_;
};

/// Exhaustive reference search with the same contract as KdTree::knn.
void knn_bruteforce(const Matrix& points, const double* query, Index k, Index limit,
                    std::vector<NeighborCandidate>& out);

}  // namespace cnngp
