#include "cnngp/kl.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cnngp/error.hpp"
#include "cnngp/vecchia.hpp"

namespace cnngp {

double kl_gaussian_zero_mean(const Matrix& s0, const Matrix& s1) {
  if (s0.rows() != s0.cols() || s1.rows() != s1.cols() || s0.rows() != s1.rows()) {
    throw DimensionError("kl_gaussian_zero_mean: covariances must be square and equal-sized");
  }
  const CholeskyFactor l0 = cholesky(s0);
  const CholeskyFactor l1 = cholesky(s1);
  const Matrix w = triangular_solve(l1, l0.matrix());
  const double trace = w.squaredNorm();
  const double n = static_cast<double>(s0.rows());
  const double kl = 0.5 * (trace - n + l1.log_determinant() - l0.log_determinant());
  return std::max(0.0, kl);
}

ToyCovarianceTriple toy_covariances(double rho12, double rho13, double rho23, double sigma2,
                                    double delta2) {
  if (!(sigma2 > 0.0)) throw ParameterError("sigma2 must be positive");
  if (!(delta2 >= 0.0)) throw ParameterError("delta2 must be non-negative");
  if (!(1.0 - rho12 * rho12 > 0.0)) throw ParameterError("need 1 - rho12^2 > 0");
  const double det =
      1.0 - (rho12 * rho12 + rho13 * rho13 + rho23 * rho23) + 2.0 * rho12 * rho13 * rho23;
  if (!(det > 0.0)) {
    throw ParameterError("correlations violate 1 - (rho12^2 + rho13^2 + rho23^2) + "
                         "2 rho12 rho13 rho23 > 0 (value " + std::to_string(det) + ")");
  }
  auto build = [&](double r13) {
    Matrix m(3, 3);
    const double d = 1.0 + delta2;
    m << d, rho12, r13, rho12, d, rho23, r13, rho23, d;
    return Matrix(sigma2 * m);
  };
  ToyCovarianceTriple t;
  t.rho12 = rho12;
  t.rho13 = rho13;
  t.rho23 = rho23;
  t.sigma2 = sigma2;
  t.delta2 = delta2;
  t.truth = build(rho13);
  t.response = build(rho12 * rho23 / (1.0 + delta2));
  t.latent = build(rho12 * rho23);
  (void)cholesky(t.response);
  (void)cholesky(t.latent);
  return t;
}

ShrinkReport frobenius_shrink_check(const Matrix& c, double tau2, const NeighborGraph& graph) {
  if (!(tau2 >= 0.0)) throw ParameterError("tau2 must be non-negative");
  const Index n = c.rows();
  const Matrix c_inv = cholesky_inverse(cholesky(c));
  const Matrix approx_inv = dense_precision(factor_from_covariance(c, graph));
  const Matrix e = c_inv - approx_inv;
  const CholeskyFactor m = cholesky(symmetrize(Matrix::Identity(n, n) + tau2 * approx_inv));
  const Matrix left = cholesky_solve(m, e);
  const Matrix b = cholesky_solve(m, left.transpose()).transpose();
  ShrinkReport r;
  r.norm_e = e.norm();
  r.norm_b = b.norm();
  if (tau2 == 0.0) {
    r.pass = std::abs(r.norm_b - r.norm_e) <= 1e-10;
  } else {
    r.pass = r.norm_b <= r.norm_e * (1.0 + 1e-12) + 1e-14;
  }
  return r;
}

}  // namespace cnngp
