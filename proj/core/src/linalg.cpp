#include "cnngp/linalg.hpp"

#include <cmath>
#include <string>

#include <Eigen/Cholesky>

#include "cnngp/error.hpp"

namespace cnngp {

namespace {

// Unblocked left-looking factorization; only used to locate the failing
// pivot after the blocked Eigen routine has reported a problem.
std::size_t first_bad_pivot(const Matrix& a) {
  const Index n = a.rows();
  Matrix l = Matrix::Zero(n, n);
  for (Index j = 0; j < n; ++j) {
    double d = a(j, j) - l.row(j).head(j).squaredNorm();
    if (!(d > 0.0) || !std::isfinite(d)) return static_cast<std::size_t>(j + 1);
    l(j, j) = std::sqrt(d);
    for (Index i = j + 1; i < n; ++i) {
      l(i, j) = (a(i, j) - l.row(i).head(j).dot(l.row(j).head(j))) / l(j, j);
    }
  }
  return 0;
}

}  // namespace

CholeskyFactor::CholeskyFactor(Matrix lower) : lower_(std::move(lower)) {
  if (lower_.rows() != lower_.cols()) {
    throw DimensionError("Cholesky factor must be square");
  }
  for (Index i = 0; i < lower_.rows(); ++i) {
    if (!(lower_(i, i) > 0.0)) {
      throw ParameterError("Cholesky factor has non-positive diagonal at " +
                           std::to_string(i + 1));
    }
  }
}

Matrix CholeskyFactor::reconstruct() const { return lower_ * lower_.transpose(); }

double CholeskyFactor::log_determinant() const {
  return 2.0 * lower_.diagonal().array().log().sum();
}

CholeskyFactor cholesky(const Matrix& a) {
  if (a.rows() != a.cols()) throw DimensionError("cholesky: matrix is not square");
  if (a.rows() == 0) throw DimensionError("cholesky: empty matrix");
  Eigen::LLT<Matrix> llt(a);
  bool ok = llt.info() == Eigen::Success;
  Matrix l;
  if (ok) {
    l = llt.matrixL();
    for (Index i = 0; i < l.rows() && ok; ++i) {
      ok = l(i, i) > 0.0 && std::isfinite(l(i, i));
    }
  }
  if (!ok) {
    std::size_t pivot = first_bad_pivot(a);
    if (pivot == 0) pivot = static_cast<std::size_t>(a.rows());
    throw DecompositionError(pivot, "cholesky: matrix is not positive definite (pivot " +
                                        std::to_string(pivot) + ")");
  }
  return CholeskyFactor(std::move(l));
}

Matrix triangular_solve(const Matrix& lower, const Matrix& b, Side side, Transpose trans) {
  const Index n = lower.rows();
  if (lower.cols() != n) throw DimensionError("triangular_solve: factor is not square");
  if (side == Side::Left && b.rows() != n) {
    throw DimensionError("triangular_solve: left-hand side has " + std::to_string(b.rows()) +
                         " rows, factor is " + std::to_string(n));
  }
  if (side == Side::Right && b.cols() != n) {
    throw DimensionError("triangular_solve: right-hand side has " + std::to_string(b.cols()) +
                         " columns, factor is " + std::to_string(n));
  }
  for (Index i = 0; i < n; ++i) {
    if (lower(i, i) == 0.0) {
      throw SingularError("triangular_solve: zero diagonal entry at " + std::to_string(i + 1));
    }
  }
  Matrix x = b;
  const auto tri = lower.triangularView<Eigen::Lower>();
  if (side == Side::Left) {
    if (trans == Transpose::No) {
      tri.solveInPlace(x);
    } else {
      tri.transpose().solveInPlace(x);
    }
  } else {
    // X op(L) = B  <=>  op(L)^T X^T = B^T
    Matrix xt = b.transpose();
    if (trans == Transpose::No) {
      tri.transpose().solveInPlace(xt);
    } else {
      tri.solveInPlace(xt);
    }
    x = xt.transpose();
  }
  return x;
}

Matrix triangular_solve(const CholeskyFactor& factor, const Matrix& b, Side side,
                        Transpose trans) {
  return triangular_solve(factor.matrix(), b, side, trans);
}

Matrix cholesky_solve(const CholeskyFactor& factor, const Matrix& b) {
  Matrix y = triangular_solve(factor, b, Side::Left, Transpose::No);
  return triangular_solve(factor, y, Side::Left, Transpose::Yes);
}

Matrix cholesky_inverse(const CholeskyFactor& factor) {
  return cholesky_solve(factor, Matrix::Identity(factor.size(), factor.size()));
}

void MatNormalParams::check_dimensions() const {
  if (row_factor.rows() != mean.rows() || row_factor.cols() != mean.rows()) {
    throw DimensionError("matrix normal: row factor must be " + std::to_string(mean.rows()) +
                         " x " + std::to_string(mean.rows()));
  }
  if (col_factor.rows() != mean.cols() || col_factor.cols() != mean.cols()) {
    throw DimensionError("matrix normal: column factor must be " +
                         std::to_string(mean.cols()) + " x " + std::to_string(mean.cols()));
  }
}

void MatNormalParams::validate() const {
  check_dimensions();
  for (Index i = 0; i < row_factor.rows(); ++i) {
    if (!(row_factor(i, i) > 0.0)) throw ParameterError("matrix normal: row factor diagonal");
  }
  for (Index i = 0; i < col_factor.rows(); ++i) {
    if (!(col_factor(i, i) > 0.0)) throw ParameterError("matrix normal: column factor diagonal");
  }
}

Matrix standard_normal_matrix(Index rows, Index cols, RandomStream& rng) {
  Matrix z(rows, cols);
  double* data = z.data();
  for (Index k = 0; k < rows * cols; ++k) data[k] = rng.normal();
  return z;
}

Matrix sample_matrix_normal(const MatNormalParams& params, RandomStream& rng) {
  params.check_dimensions();
  const Matrix z = standard_normal_matrix(params.mean.rows(), params.mean.cols(), rng);
  return params.mean + params.row_factor.triangularView<Eigen::Lower>() * z *
                           params.col_factor.transpose().triangularView<Eigen::Upper>();
}

void InvWishartParams::validate() const {
  if (scale.rows() != scale.cols() || scale.rows() == 0) {
    throw DimensionError("inverse Wishart: scale must be square and non-empty");
  }
  const double q = static_cast<double>(scale.rows());
  if (!(dof > q - 1.0)) {
    throw ParameterError("inverse Wishart: degrees of freedom " + std::to_string(dof) +
                         " must exceed q - 1 = " + std::to_string(q - 1.0));
  }
  if (asymmetry(scale) > 1e-10 * (1.0 + scale.cwiseAbs().maxCoeff())) {
    throw ParameterError("inverse Wishart: scale matrix is not symmetric");
  }
}

Matrix sample_inv_wishart(const InvWishartParams& params, RandomStream& rng) {
  params.validate();
  return sample_inv_wishart(cholesky(params.scale), params.dof, rng);
}

Matrix sample_inv_wishart(const CholeskyFactor& scale_factor, double dof, RandomStream& rng) {
  const Index q = scale_factor.size();
  if (!(dof > static_cast<double>(q) - 1.0)) {
    throw ParameterError("inverse Wishart: degrees of freedom must exceed q - 1");
  }
  // Bartlett: W = (L^{-T} A)(L^{-T} A)^T ~ W(Psi^{-1}, nu) with Psi = L L^T.
  // Sigma = W^{-1} = T T^T where T = L A^{-T}.
  Matrix bartlett = Matrix::Zero(q, q);
  for (Index i = 0; i < q; ++i) {
    bartlett(i, i) = std::sqrt(rng.chi_square(dof - static_cast<double>(i)));
    for (Index j = 0; j < i; ++j) bartlett(i, j) = rng.normal();
  }
  // T^T = A^{-1} L^T
  Matrix t_transpose = triangular_solve(bartlett, scale_factor.matrix().transpose());
  Matrix sigma = t_transpose.transpose() * t_transpose;
  return symmetrize(sigma);
}

double asymmetry(const Matrix& a) {
  if (a.rows() != a.cols()) throw DimensionError("asymmetry: matrix is not square");
  return (a - a.transpose()).cwiseAbs().maxCoeff();
}

Matrix symmetrize(const Matrix& a) { return 0.5 * (a + a.transpose()); }

}  // namespace cnngp
