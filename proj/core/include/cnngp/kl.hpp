#pragma once

#include "cnngp/linalg.hpp"
#include "cnngp/spatial.hpp"

namespace cnngp {

/// KL(N(0, s0) || N(0, s1)) = (tr(s1^{-1} s0) - n + log det s1 - log det s0) / 2,
/// evaluated through Cholesky factors. Throws DecompositionError for non-SPD input.
double kl_gaussian_zero_mean(const Matrix& s0, const Matrix& s1);

/// Three-site example: true covariance sigma2 (R + delta2 I) and the collapsed
/// covariances of the response and latent nearest-neighbor models with
/// neighbor sets N(2) = {1}, N(3) = {2}. Only the (1,3) entries differ.
struct ToyCovarianceTriple {
  Matrix truth;
  Matrix response;
  Matrix latent;
  double rho12 = 0.0;
  double rho13 = 0.0;
  double rho23 = 0.0;
  double sigma2 = 1.0;
  double delta2 = 0.0;
};

/// Throws ParameterError unless 1 - rho12^2 > 0 and
/// 1 - (rho12^2 + rho13^2 + rho23^2) + 2 rho12 rho13 rho23 > 0.
ToyCovarianceTriple toy_covariances(double rho12, double rho13, double rho23, double sigma2,
                                    double delta2);

struct ShrinkReport {
  double norm_e = 0.0;  ///< ||C^{-1} - C~^{-1}||_F
  double norm_b = 0.0;  ///< ||(I + tau2 C~^{-1})^{-1} E (I + tau2 C~^{-1})^{-1}||_F
  bool pass = false;    ///< norm_b <= norm_e (equality within 1e-10 when tau2 = 0)
};

/// Dense check on a small latent covariance `c` with nearest-neighbor
/// precision C~^{-1} built from `c` on `graph`.
ShrinkReport frobenius_shrink_check(const Matrix& c, double tau2, const NeighborGraph& graph);

}  // namespace cnngp
