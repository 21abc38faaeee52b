#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cnngp/linalg.hpp"

namespace cnngp {

enum class OrderingStrategy { Sum, X, Y, Given };

std::optional<OrderingStrategy> parse_ordering(const std::string& name);
std::string to_string(OrderingStrategy s);

/// Points in R^d stored in model order, together with the permutation back
/// to the caller's (input) order.
class LocationSet {
 public:
  LocationSet() = default;

  /// Validates (finite, no duplicates) and orders the rows of `points`.
  /// `given` is consulted only for OrderingStrategy::Given and lists, for each
  /// ordered position, the input row placed there.
  static LocationSet create(const Matrix& points, OrderingStrategy strategy,
                            std::span<const Index> given = {});

  Index size() const { return coords_.rows(); }
  Index dim() const { return coords_.cols(); }
  /// Ordered coordinates, n x d.
  const Matrix& coords() const { return coords_; }
  /// Input row stored at ordered position k.
  Index input_index(Index k) const { return order_[static_cast<std::size_t>(k)]; }
  /// Ordered position of input row r.
  Index ordered_index(Index r) const { return rank_[static_cast<std::size_t>(r)]; }
  const std::vector<Index>& order() const { return order_; }

  /// Reorders the rows of an input-order matrix into model order.
  Matrix to_model_order(const Matrix& input_rows) const;
  /// Inverse of to_model_order.
  Matrix to_input_order(const Matrix& model_rows) const;

 private:
  Matrix coords_;
  std::vector<Index> order_;
  std::vector<Index> rank_;
};

/// Same as LocationSet::create.
LocationSet order_locations(const Matrix& points, OrderingStrategy strategy,
                            std::span<const Index> given = {});

/// Throws DataError on non-finite coordinates or duplicate rows; the message
/// lists the offending pairs (input row numbers, 0-based).
void check_locations(const Matrix& points);

enum class NeighborMode { Training, Prediction };

/// Conditioning sets N(i) stored compactly. Indices are 0-based positions in
/// the ordered reference set and each list is sorted ascending.
///
/// Training mode: N(0) is empty and N(i) holds the min(i, m) nearest
/// predecessors of point i. Prediction mode: N(i) holds the min(m, n)
/// nearest reference points of query i. Equidistant candidates are resolved
/// in favour of the smaller index.
class NeighborGraph {
 public:
  NeighborGraph() = default;
  NeighborGraph(NeighborMode mode, Index reference_size, Index max_neighbors,
                std::vector<Index> offsets, std::vector<Index> indices);

  NeighborMode mode() const { return mode_; }
  Index size() const { return static_cast<Index>(offsets_.size()) - 1; }
  Index reference_size() const { return reference_size_; }
  Index max_neighbors() const { return m_; }
  std::span<const Index> neighbors(Index i) const {
    return {indices_.data() + offsets_[i],
            static_cast<std::size_t>(offsets_[i + 1] - offsets_[i])};
  }
  std::size_t total_edges() const { return indices_.size(); }

 private:
  NeighborMode mode_ = NeighborMode::Training;
  Index reference_size_ = 0;
  Index m_ = 0;
  std::vector<Index> offsets_{0};
  std::vector<Index> indices_;
};

NeighborGraph build_training_neighbors(const LocationSet& locations, Index m);
NeighborGraph build_training_neighbors(const Matrix& ordered_coords, Index m);

/// Neighbors of each query row (queries kept in the caller's order).
NeighborGraph build_prediction_neighbors(const LocationSet& reference, const Matrix& queries,
                                         Index m);
NeighborGraph build_prediction_neighbors(const Matrix& reference_coords, const Matrix& queries,
                                         Index m);

/// Isotropic correlation function. Only the exponential family exists today.
struct CorrelationModel {
  enum class Family { Exponential };

  Family family = Family::Exponential;
  double decay = 1.0;  ///< phi > 0

  static CorrelationModel exponential(double decay);
  void validate() const;

  double operator()(double distance) const;
  /// Distance at which the correlation falls to 0.05.
  double effective_range() const;
};

double distance(std::span<const double> a, std::span<const double> b);

double correlation(const CorrelationModel& model, std::span<const double> a,
                   std::span<const double> b);

/// rho(A, B): |A| x |B| correlation matrix between the rows of a and b.
Matrix corr_matrix(const CorrelationModel& model, const Matrix& a, const Matrix& b);
Matrix corr_matrix(const CorrelationModel& model, const Matrix& a);

}  // namespace cnngp
