#include "cnngp/kdtree.hpp"

#include <algorithm>
#include <numeric>

#include "cnngp/error.hpp"

namespace cnngp {

namespace {

void push_candidate(std::vector<NeighborCandidate>& heap, Index k, NeighborCandidate c) {
  if (static_cast<Index>(heap.size()) < k) {
    heap.push_back(c);
    std::push_heap(heap.begin(), heap.end());
  } else if (c < heap.front()) {
    std::pop_heap(heap.begin(), heap.end());
    heap.back() = c;
    std::push_heap(heap.begin(), heap.end());
  }
}

}  // namespace

KdTree::KdTree(const Matrix& points, Index leaf_size) : n_(points.rows()), dim_(points.cols()) {
  if (dim_ < 1) throw DimensionError("kd-tree: points need at least one coordinate");
  coords_.resize(static_cast<std::size_t>(n_ * dim_));
  for (Index i = 0; i < n_; ++i) {
    for (Index j = 0; j < dim_; ++j) coords_[static_cast<std::size_t>(i * dim_ + j)] = points(i, j);
  }
  perm_.resize(static_cast<std::size_t>(n_));
  std::iota(perm_.begin(), perm_.end(), Index{0});
  if (n_ > 0) {
    nodes_.reserve(static_cast<std::size_t>(2 * (n_ / std::max<Index>(leaf_size, 1) + 1)));
    build(0, n_, std::max<Index>(leaf_size, 1));
  }
}

Index KdTree::build(Index begin, Index end, Index leaf_size) {
  const Index id = static_cast<Index>(nodes_.size());
  nodes_.push_back(Node{begin, end});
  Index min_index = *std::min_element(perm_.begin() + begin, perm_.begin() + end);
  nodes_[id].min_index = min_index;
  if (end - begin <= leaf_size) return id;

  // split the widest dimension at the median
  int best_dim = 0;
  double best_spread = -1.0;
  for (Index j = 0; j < dim_; ++j) {
    double lo = coords_[static_cast<std::size_t>(perm_[begin] * dim_ + j)];
    double hi = lo;
    for (Index k = begin + 1; k < end; ++k) {
      const double v = coords_[static_cast<std::size_t>(perm_[k] * dim_ + j)];
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    if (hi - lo > best_spread) {
      best_spread = hi - lo;
      best_dim = static_cast<int>(j);
    }
  }
  const Index mid = begin + (end - begin) / 2;
  auto key = [&](Index p) { return coords_[static_cast<std::size_t>(p * dim_ + best_dim)]; };
  std::nth_element(perm_.begin() + begin, perm_.begin() + mid, perm_.begin() + end,
                   [&](Index a, Index b) { return key(a) < key(b); });
  const double split = key(perm_[mid]);
  nodes_[id].split_dim = best_dim;
  nodes_[id].split_value = split;
  const Index left = build(begin, mid, leaf_size);
  const Index right = build(mid, end, leaf_size);
  nodes_[id].left = left;
  nodes_[id].right = right;
  return id;
}

void KdTree::search(Index node_id, const double* query, Index k, Index limit,
                    std::vector<NeighborCandidate>& heap) const {
  const Node& node = nodes_[static_cast<std::size_t>(node_id)];
  if (node.min_index >= limit) return;
  if (node.left < 0) {
    for (Index t = node.begin; t < node.end; ++t) {
      const Index p = perm_[static_cast<std::size_t>(t)];
      if (p >= limit) continue;
      const double* x = &coords_[static_cast<std::size_t>(p * dim_)];
      double d2 = 0.0;
      for (Index j = 0; j < dim_; ++j) {
        const double diff = x[j] - query[j];
        d2 += diff * diff;
      }
      push_candidate(heap, k, {d2, p});
    }
    return;
  }
  const double diff = query[node.split_dim] - node.split_value;
  const Index near = diff < 0.0 ? node.left : node.right;
  const Index far = diff < 0.0 ? node.right : node.left;
  search(near, query, k, limit, heap);
  // Points with coordinate equal to the split value can sit on either side,
  // so the far side is pruned only on strictly larger plane distance.
  if (static_cast<Index>(heap.size()) < k || diff * diff <= heap.front().dist2) {
    search(far, query, k, limit, heap);
  }
}

void KdTree::knn(const double* query, Index k, Index limit,
                 std::vector<NeighborCandidate>& out) const {
  out.clear();
  if (k <= 0 || n_ == 0) return;
  limit = std::min(limit, n_);
  search(0, query, k, limit, out);
  std::sort(out.begin(), out.end());
}

void knn_bruteforce(const Matrix& points, const double* query, Index k, Index limit,
                    std::vector<NeighborCandidate>& out) {
  out.clear();
  if (k <= 0) return;
  limit = std::min(limit, points.rows());
  for (Index p = 0; p < limit; ++p) {
    double d2 = 0.0;
    for (Index j = 0; j < points.cols(); ++j) {
      const double diff = points(p, j) - query[j];
      d2 += diff * diff;
    }
    push_candidate(out, k, {d2, p});
  }
  std::sort(out.begin(), out.end());
}

}  // namespace cnngp
