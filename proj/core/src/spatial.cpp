#include "cnngp/spatial.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "cnngp/error.hpp"
#include "cnngp/kdtree.hpp"
#include "cnngp/parallel.hpp"

namespace cnngp {

namespace {

constexpr Index kBruteForceBelow = 256;

}  // namespace

std::optional<OrderingStrategy> parse_ordering(const std::string& name) {
  if (name == "sum") return OrderingStrategy::Sum;
  if (name == "x") return OrderingStrategy::X;
  if (name == "y") return OrderingStrategy::Y;
  if (name == "given") return OrderingStrategy::Given;
  return std::nullopt;
}

std::string to_string(OrderingStrategy s) {
  switch (s) {
    case OrderingStrategy::Sum: return "sum";
    case OrderingStrategy::X: return "x";
    case OrderingStrategy::Y: return "y";
    case OrderingStrategy::Given: return "given";
  }
  return "sum";
}

void check_locations(const Matrix& points) {
  const Index n = points.rows();
  if (points.cols() < 1) throw DataError("locations need at least one coordinate column");
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < points.cols(); ++j) {
      if (!std::isfinite(points(i, j))) {
        throw DataError("non-finite coordinate in row " + std::to_string(i));
      }
    }
  }
  std::vector<Index> idx(static_cast<std::size_t>(n));
  std::iota(idx.begin(), idx.end(), Index{0});
  auto lex_less = [&](Index a, Index b) {
    for (Index j = 0; j < points.cols(); ++j) {
      if (points(a, j) != points(b, j)) return points(a, j) < points(b, j);
    }
    return a < b;
  };
  std::sort(idx.begin(), idx.end(), lex_less);
  std::vector<std::pair<Index, Index>> dups;
  for (std::size_t k = 1; k < idx.size(); ++k) {
    if ((points.row(idx[k]).array() == points.row(idx[k - 1]).array()).all()) {
      dups.emplace_back(std::min(idx[k - 1], idx[k]), std::max(idx[k - 1], idx[k]));
    }
  }
  if (!dups.empty()) {
    std::ostringstream msg;
    msg << "duplicate coordinates in rows:";
    const std::size_t shown = std::min<std::size_t>(dups.size(), 20);
    for (std::size_t k = 0; k < shown; ++k) {
      msg << " (" << dups[k].first << ", " << dups[k].second << ")";
    }
    if (dups.size() > shown) msg << " ... " << dups.size() << " pairs in total";
    throw DataError(msg.str());
  }
}

LocationSet LocationSet::create(const Matrix& points, OrderingStrategy strategy,
                                std::span<const Index> given) {
  check_locations(points);
  const Index n = points.rows();
  LocationSet out;
  out.order_.resize(static_cast<std::size_t>(n));
  std::iota(out.order_.begin(), out.order_.end(), Index{0});

  if (strategy == OrderingStrategy::Given) {
    if (!given.empty()) {
      if (static_cast<Index>(given.size()) != n) {
        throw ParameterError("given ordering has " + std::to_string(given.size()) +
                             " entries for " + std::to_string(n) + " locations");
      }
      std::vector<bool> seen(static_cast<std::size_t>(n), false);
      for (Index r : given) {
        if (r < 0 || r >= n || seen[static_cast<std::size_t>(r)]) {
          throw ParameterError("given ordering is not a permutation");
        }
        seen[static_cast<std::size_t>(r)] = true;
      }
      out.order_.assign(given.begin(), given.end());
    }
  } else {
    Vector key(n);
    switch (strategy) {
      case OrderingStrategy::Sum: key = points.rowwise().sum(); break;
      case OrderingStrategy::X: key = points.col(0); break;
      case OrderingStrategy::Y:
        if (points.cols() < 2) throw ParameterError("y ordering needs two coordinates");
        key = points.col(1);
        break;
      case OrderingStrategy::Given: break;
    }
    std::stable_sort(out.order_.begin(), out.order_.end(),
                     [&](Index a, Index b) { return key[a] < key[b]; });
  }

  out.rank_.resize(static_cast<std::size_t>(n));
  out.coords_.resize(n, points.cols());
  for (Index k = 0; k < n; ++k) {
    out.rank_[static_cast<std::size_t>(out.order_[static_cast<std::size_t>(k)])] = k;
    out.coords_.row(k) = points.row(out.order_[static_cast<std::size_t>(k)]);
  }
  return out;
}

LocationSet order_locations(const Matrix& points, OrderingStrategy strategy,
                            std::span<const Index> given) {
  return LocationSet::create(points, strategy, given);
}

Matrix LocationSet::to_model_order(const Matrix& input_rows) const {
  if (input_rows.rows() != size()) {
    throw DimensionError("to_model_order: expected " + std::to_string(size()) + " rows");
  }
  Matrix out(input_rows.rows(), input_rows.cols());
  for (Index k = 0; k < size(); ++k) out.row(k) = input_rows.row(input_index(k));
  return out;
}

Matrix LocationSet::to_input_order(const Matrix& model_rows) const {
  if (model_rows.rows() != size()) {
    throw DimensionError("to_input_order: expected " + std::to_string(size()) + " rows");
  }
  Matrix out(model_rows.rows(), model_rows.cols());
  for (Index k = 0; k < size(); ++k) out.row(input_index(k)) = model_rows.row(k);
  return out;
}

NeighborGraph::NeighborGraph(NeighborMode mode, Index reference_size, Index max_neighbors,
                             std::vector<Index> offsets, std::vector<Index> indices)
    : mode_(mode),
      reference_size_(reference_size),
      m_(max_neighbors),
      offsets_(std::move(offsets)),
      indices_(std::move(indices)) {
  if (offsets_.empty() || offsets_.front() != 0 ||
      static_cast<std::size_t>(offsets_.back()) != indices_.size()) {
    throw DimensionError("neighbor graph: inconsistent offsets");
  }
}

namespace {

// Runs a k-nearest query per target and packs the sorted index lists.
template <typename Query>
NeighborGraph pack_neighbors(NeighborMode mode, Index targets, Index reference_size, Index m,
                             Query&& query) {
  std::vector<std::vector<Index>> lists(static_cast<std::size_t>(targets));
  parallel_for(0, static_cast<std::size_t>(targets), [&](std::size_t i) {
    std::vector<NeighborCandidate> found;
    query(static_cast<Index>(i), found);
    auto& list = lists[i];
    list.reserve(found.size());
    for (const auto& c : found) list.push_back(c.index);
    std::sort(list.begin(), list.end());
  });
  std::vector<Index> offsets(static_cast<std::size_t>(targets) + 1, 0);
  for (Index i = 0; i < targets; ++i) {
    offsets[static_cast<std::size_t>(i) + 1] =
        offsets[static_cast<std::size_t>(i)] + static_cast<Index>(lists[static_cast<std::size_t>(i)].size());
  }
  std::vector<Index> indices;
  indices.reserve(static_cast<std::size_t>(offsets.back()));
  for (auto& l : lists) indices.insert(indices.end(), l.begin(), l.end());
  return NeighborGraph(mode, reference_size, m, std::move(offsets), std::move(indices));
}

}  // namespace

NeighborGraph build_training_neighbors(const Matrix& coords, Index m) {
  if (m < 1) throw ParameterError("number of neighbors m must be at least 1");
  const Index n = coords.rows();
  if (n < kBruteForceBelow) {
    return pack_neighbors(NeighborMode::Training, n, n, m,
                          [&](Index i, std::vector<NeighborCandidate>& out) {
                            Vector q = coords.row(i).transpose();
                            knn_bruteforce(coords, q.data(), m, i, out);
                          });
  }
  const KdTree tree(coords);
  return pack_neighbors(NeighborMode::Training, n, n, m,
                        [&](Index i, std::vector<NeighborCandidate>& out) {
                          if (i <= m) {
                            // all predecessors qualify
                            out.clear();
                            for (Index j = 0; j < i; ++j) out.push_back({0.0, j});
                            return;
                          }
                          Vector q = coords.row(i).transpose();
                          tree.knn(q.data(), m, i, out);
                        });
}

NeighborGraph build_training_neighbors(const LocationSet& locations, Index m) {
  return build_training_neighbors(locations.coords(), m);
}

NeighborGraph build_prediction_neighbors(const Matrix& reference, const Matrix& queries,
                                         Index m) {
  if (m < 1) throw ParameterError("number of neighbors m must be at least 1");
  const Index n = reference.rows();
  if (n == 0) throw DataError("prediction neighbors: reference set is empty");
  if (queries.cols() != reference.cols()) {
    throw DimensionError("prediction neighbors: query and reference dimensions differ");
  }
  const Index k = std::min(m, n);
  if (n < kBruteForceBelow) {
    return pack_neighbors(NeighborMode::Prediction, queries.rows(), n, m,
                          [&](Index i, std::vector<NeighborCandidate>& out) {
                            Vector q = queries.row(i).transpose();
                            knn_bruteforce(reference, q.data(), k, n, out);
                          });
  }
  const KdTree tree(reference);
  return pack_neighbors(NeighborMode::Prediction, queries.rows(), n, m,
                        [&](Index i, std::vector<NeighborCandidate>& out) {
                          Vector q = queries.row(i).transpose();
                          tree.knn(q.data(), k, n, out);
                        });
}

NeighborGraph build_prediction_neighbors(const LocationSet& reference, const Matrix& queries,
                                         Index m) {
  return build_prediction_neighbors(reference.coords(), queries, m);
}

CorrelationModel CorrelationModel::exponential(double decay) {
  CorrelationModel model{Family::Exponential, decay};
  model.validate();
  return model;
}

void CorrelationModel::validate() const {
  if (!(decay > 0.0) || !std::isfinite(decay)) {
    throw ParameterError("correlation decay phi must be positive, got " + std::to_string(decay));
  }
}

double CorrelationModel::operator()(double d) const { return std::exp(-decay * d); }

double CorrelationModel::effective_range() const { return std::log(20.0) / decay; }

double distance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw DimensionError("distance: dimension mismatch");
  double s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) s += (a[j] - b[j]) * (a[j] - b[j]);
  return std::sqrt(s);
}

double correlation(const CorrelationModel& model, std::span<const double> a,
                   std::span<const double> b) {
  model.validate();
  return model(distance(a, b));
}

Matrix corr_matrix(const CorrelationModel& model, const Matrix& a, const Matrix& b) {
  model.validate();
  if (a.cols() != b.cols()) throw DimensionError("corr_matrix: dimension mismatch");
  Matrix r(a.rows(), b.rows());
  for (Index j = 0; j < b.rows(); ++j) {
    for (Index i = 0; i < a.rows(); ++i) {
      r(i, j) = model((a.row(i) - b.row(j)).norm());
    }
  }
  return r;
}

Matrix corr_matrix(const CorrelationModel& model, const Matrix& a) {
  model.validate();
  const Index n = a.rows();
  Matrix r(n, n);
  for (Index j = 0; j < n; ++j) {
    r(j, j) = 1.0;
    for (Index i = j + 1; i < n; ++i) {
      r(i, j) = model((a.row(i) - a.row(j)).norm());
      r(j, i) = r(i, j);
    }
  }
  return r;
}

}  // namespace cnngp
