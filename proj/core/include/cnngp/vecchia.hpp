#pragma once

#include <string>

#include "cnngp/linalg.hpp"
#include "cnngp/sparse.hpp"
#include "cnngp/spatial.hpp"

namespace cnngp {

/// Which kernel a factor approximates.
///
/// Response: rho + (1/alpha - 1) I, marginal variance 1/alpha.
/// Latent: rho alone (alpha replaced by 1), marginal variance 1.
enum class KernelKind { Response, Latent };

std::string to_string(KernelKind kind);

/// Kernel diagonal (1/alpha or 1) and nugget (1/alpha - 1 or 0).
double kernel_diagonal(KernelKind kind, double alpha);
double kernel_nugget(KernelKind kind, double alpha);
void check_alpha(double alpha);

/// Sparse precision factorization K^{-1} ~= (I - A)^T D^{-1} (I - A).
struct VecchiaFactor {
  SparseRowMatrix a;  ///< n x n, strictly lower triangular, row i supported on N(i)
  Vector d;           ///< conditional variances, all positive
  KernelKind kind = KernelKind::Latent;
  double alpha = 1.0;

  Index size() const { return d.size(); }
};

/// Per-site kriging weights against a reference set.
struct PredictionWeights {
  SparseRowMatrix a;  ///< n' x n, row i supported on the neighbors of query i
  Vector d;           ///< conditional variances (non-negative; zero at observed sites for latent kind)
  KernelKind kind = KernelKind::Latent;
  double alpha = 1.0;

  Index size() const { return d.size(); }
};

/// Row weights solve [rho(N,N) + nugget I] a = rho(N, s_i) by a dense Cholesky
/// per row; d_i = diag - a . rho(N, s_i). `alpha` is ignored for the latent
/// kind. Throws DecompositionError (pivot() = 1-based row) when a neighbor
/// system is not positive definite or a conditional variance is not positive.
VecchiaFactor build_factor(const NeighborGraph& graph, const Matrix& ordered_coords,
                           const CorrelationModel& corr, double alpha, KernelKind kind);
VecchiaFactor build_factor(const NeighborGraph& graph, const LocationSet& locations,
                           const CorrelationModel& corr, double alpha, KernelKind kind);

PredictionWeights build_prediction_weights(const NeighborGraph& graph,
                                           const Matrix& reference_coords,
                                           const Matrix& queries, const CorrelationModel& corr,
                                           double alpha, KernelKind kind);

/// Distances needed to rebuild factors for many (phi, alpha) on one graph.
/// Row i stores the packed lower triangle of dist(N(i), N(i)) followed by
/// dist(N(i), target i).
class NeighborDistances {
 public:
  NeighborDistances(const NeighborGraph& graph, const Matrix& reference_coords,
                    const Matrix& target_coords);

  const NeighborGraph& graph() const { return *graph_; }
  const double* row(Index i) const { return values_.data() + offsets_[static_cast<std::size_t>(i)]; }

  /// Same layout with every distance d replaced by corr(d).
  NeighborDistances correlations(const CorrelationModel& corr) const;
  bool holds_correlations() const { return correlations_; }

 private:
  NeighborDistances() = default;

  const NeighborGraph* graph_ = nullptr;
  std::vector<std::size_t> offsets_;
  std::vector<double> values_;
  bool correlations_ = false;
};

/// The table must hold distances (not correlations); the graph it refers to
/// must outlive it.
VecchiaFactor build_factor(const NeighborDistances& distances, const CorrelationModel& corr,
                           double alpha, KernelKind kind);
PredictionWeights build_prediction_weights(const NeighborDistances& distances,
                                           const CorrelationModel& corr, double alpha,
                                           KernelKind kind);

/// As above from a table produced by NeighborDistances::correlations, so that
/// one correlation evaluation serves many alpha values.
VecchiaFactor build_factor(const NeighborDistances& correlations, double alpha, KernelKind kind);
PredictionWeights build_prediction_weights(const NeighborDistances& correlations, double alpha,
                                           KernelKind kind);

/// D^{-1/2} (I - A) B without forming any n x n matrix.
Matrix whiten(const VecchiaFactor& factor, const Matrix& b);

/// V_rho B = D_rho^{-1/2} (I - A_rho) B; requires a latent-kind factor.
Matrix apply_vrho(const VecchiaFactor& factor, const Matrix& b);

/// V_rho as an explicit sparse matrix (diagonal entry first in sort order).
SparseRowMatrix vrho_matrix(const VecchiaFactor& factor);

/// Dense (I - A)^T D^{-1} (I - A); intended for small n.
Matrix dense_precision(const VecchiaFactor& factor);

/// Vecchia factor of an arbitrary dense covariance matrix on a training
/// graph (covariances read directly from `cov`). Dense helper for small n.
VecchiaFactor factor_from_covariance(const Matrix& cov, const NeighborGraph& graph);

}  // namespace cnngp
