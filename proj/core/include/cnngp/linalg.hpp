#pragma once

// Dense kernels and matrix-variate samplers.
//
// Storage convention: every dense matrix is an Eigen::MatrixXd, column-major.
// Rows index sites (or coefficients), columns index responses.

#include <cstddef>

#include <Eigen/Core>

#include "cnngp/random.hpp"

namespace cnngp {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Lower-triangular factor L with L * L^T equal to the factored matrix.
class CholeskyFactor {
 public:
  CholeskyFactor() = default;
  /// Wraps an existing lower-triangular matrix; checks shape and positive diagonal.
  explicit CholeskyFactor(Matrix lower);

  Index size() const { return lower_.rows(); }
  const Matrix& matrix() const { return lower_; }
  Matrix reconstruct() const;
  /// log det(L L^T).
  double log_determinant() const;

 private:
  Matrix lower_;
};

/// Throws DecompositionError naming the first non-positive pivot (1-based).
CholeskyFactor cholesky(const Matrix& a);

enum class Side { Left, Right };
enum class Transpose { No, Yes };

/// Solves op(L) X = B (Side::Left) or X op(L) = B (Side::Right) with op(L) = L or L^T.
Matrix triangular_solve(const Matrix& lower, const Matrix& b, Side side = Side::Left,
                        Transpose trans = Transpose::No);
Matrix triangular_solve(const CholeskyFactor& factor, const Matrix& b,
                        Side side = Side::Left, Transpose trans = Transpose::No);

/// Solves (L L^T) X = B.
Matrix cholesky_solve(const CholeskyFactor& factor, const Matrix& b);

/// (L L^T)^{-1}, formed by triangular solves.
Matrix cholesky_inverse(const CholeskyFactor& factor);

/// MN(M, U, V) with U = L_U L_U^T (rows) and V = L_V L_V^T (columns).
///
/// The scale factors are taken as given so that degenerate (zero) factors can
/// be used in tests; `validate()` enforces the positive-diagonal invariant.
struct MatNormalParams {
  Matrix mean;
  Matrix row_factor;
  Matrix col_factor;

  void check_dimensions() const;
  void validate() const;
};

/// M + L_U Z L_V^T with Z filled column-major by standard normals from `rng`.
Matrix sample_matrix_normal(const MatNormalParams& params, RandomStream& rng);

/// Fills an r x c matrix with iid standard normals, column-major order.
Matrix standard_normal_matrix(Index rows, Index cols, RandomStream& rng);

struct InvWishartParams {
  Matrix scale;  ///< Psi, q x q symmetric positive definite.
  double dof;    ///< nu > q - 1.

  void validate() const;
};

/// Draw from IW(Psi, nu) via the Bartlett decomposition of W(Psi^{-1}, nu).
Matrix sample_inv_wishart(const InvWishartParams& params, RandomStream& rng);

/// Same as above, reusing a precomputed Cholesky factor of Psi.
Matrix sample_inv_wishart(const CholeskyFactor& scale_factor, double dof, RandomStream& rng);

/// Maximum absolute asymmetry |A - A^T|.
double asymmetry(const Matrix& a);

/// (A + A^T) / 2.
Matrix symmetrize(const Matrix& a);

}  // namespace cnngp
