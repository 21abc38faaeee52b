#pragma once

#include <cstdint>

#include "cnngp/dataset.hpp"
#include "cnngp/linalg.hpp"

namespace cnngp {

/// Synthetic multivariate latent-process data on the unit square:
/// Y = X beta + omega + eps, omega ~ MN(0, rho_phi, Sigma), eps rows
/// N(0, (1/alpha - 1) Sigma), X = [1, z_2, ..., z_p] with standard normal z.
struct SimConfig {
  Index n = 1200;
  Index holdout = 200;
  Matrix beta;   ///< p x q
  Matrix sigma;  ///< q x q
  double phi = 6.0;
  double alpha = 0.9;
  std::uint64_t seed = 1;

  /// beta = [[1, 1], [-2, 2]], Sigma = 9 [[0.222, -0.111], [-0.111, 0.167]].
  static SimConfig table1();

  Index p() const { return beta.rows(); }
  Index q() const { return beta.cols(); }
  void validate() const;
};

/// Largest n accepted by the dense generator.
inline constexpr Index kMaxSimulationSites = 20000;

struct SimOutput {
  Dataset data;          ///< all sites, holdout flags set
  Matrix omega;          ///< n x q, same row order as `data`
  Matrix omega_cov;      ///< empirical covariance of the realized omega rows
  Matrix noise_cov;      ///< (1/alpha - 1) Sigma
  SimConfig config;
};

/// Deterministic given config.seed; single-threaded.
SimOutput generate(const SimConfig& config);

}  // namespace cnngp
