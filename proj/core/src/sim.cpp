#include "cnngp/sim.hpp"

#include <string>

#include <Eigen/Cholesky>

#include "cnngp/error.hpp"
#include "cnngp/random.hpp"
#include "cnngp/spatial.hpp"

namespace cnngp {

SimConfig SimConfig::table1() {
  SimConfig c;
  c.beta.resize(2, 2);
  c.beta << 1.0, 1.0, -2.0, 2.0;
  c.sigma.resize(2, 2);
  c.sigma << 0.222, -0.111, -0.111, 0.167;
  c.sigma *= 9.0;
  return c;
}

void SimConfig::validate() const {
  if (n < 1) throw ParameterError("simulation needs n >= 1");
  if (n > kMaxSimulationSites) {
    throw ParameterError("n = " + std::to_string(n) + " exceeds the dense generator limit of " +
                         std::to_string(kMaxSimulationSites) +
                         " sites; larger fields need a blocked generator, which is not provided");
  }
  if (holdout < 0 || holdout >= n) throw ParameterError("holdout count must lie in [0, n)");
  if (p() < 1 || q() < 1) throw ParameterError("beta must be at least 1 x 1");
  if (sigma.rows() != q() || sigma.cols() != q()) throw DimensionError("Sigma must be q x q");
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw ParameterError("simulation needs alpha strictly inside (0, 1) for the noise term");
  }
  CorrelationModel::exponential(phi).validate();
  (void)cholesky(sigma);
}

SimOutput generate(const SimConfig& config) {
  config.validate();
  const Index n = config.n;
  const Index p = config.p();
  const Index q = config.q();

  RandomStream site_rng(config.seed, 0, stream::kSimulate);
  Matrix coords(n, 2);
  for (Index i = 0; i < n; ++i) {
    coords(i, 0) = site_rng.uniform();
    coords(i, 1) = site_rng.uniform();
  }
  check_locations(coords);

  RandomStream x_rng(config.seed, 1, stream::kSimulate);
  Matrix x(n, p);
  x.col(0).setOnes();
  for (Index j = 1; j < p; ++j) {
    for (Index i = 0; i < n; ++i) x(i, j) = x_rng.normal();
  }

  const Matrix corr = corr_matrix(CorrelationModel::exponential(config.phi), coords);
  Eigen::LLT<Matrix> llt(corr);
  if (llt.info() != Eigen::Success) throw DecompositionError(0, "site correlation matrix is not SPD");
  const Matrix sigma_chol = cholesky(config.sigma).matrix();

  RandomStream omega_rng(config.seed, 2, stream::kSimulate);
  const Matrix z = standard_normal_matrix(n, q, omega_rng);
  const Matrix omega = Matrix(llt.matrixL() * z) * sigma_chol.transpose();

  const double nugget = 1.0 / config.alpha - 1.0;
  RandomStream noise_rng(config.seed, 3, stream::kSimulate);
  const Matrix eps = std::sqrt(nugget) * standard_normal_matrix(n, q, noise_rng) * sigma_chol.transpose();

  SimOutput out;
  out.config = config;
  out.data.coords = coords;
  out.data.x = x;
  out.data.y = x * config.beta + omega + eps;
  out.omega = omega;
  out.noise_cov = nugget * config.sigma;

  RandomStream split_rng(config.seed, 4, stream::kSimulate);
  const auto perm = random_permutation(n, split_rng);
  out.data.holdout.assign(static_cast<std::size_t>(n), false);
  for (Index k = 0; k < config.holdout; ++k) out.data.holdout[static_cast<std::size_t>(perm[static_cast<std::size_t>(k)])] = true;

  const Matrix centered = omega.rowwise() - omega.colwise().mean();
  out.omega_cov = n > 1 ? Matrix(centered.transpose() * centered / static_cast<double>(n - 1))
                        : Matrix::Zero(q, q);
  return out;
}

}  // namespace cnngp
