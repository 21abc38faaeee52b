#include "cnngp/response_model.hpp"

#include <cmath>
#include <string>

#include "cnngp/error.hpp"
#include "cnngp/parallel.hpp"
#include "cnngp/random.hpp"

namespace cnngp {

PriorSpec PriorSpec::flat(Index q) {
  PriorSpec p;
  p.psi = Matrix::Identity(q, q);
  p.nu = static_cast<double>(q) + 1.0;
  return p;
}

PriorSpec PriorSpec::proper(Matrix mu_beta, const Matrix& v_r, Matrix psi, double nu) {
  PriorSpec p;
  p.mode = Mode::Proper;
  p.mu_beta = std::move(mu_beta);
  p.vr_factor = cholesky(v_r).matrix();
  p.psi = std::move(psi);
  p.nu = nu;
  return p;
}

void PriorSpec::validate(Index p, Index q) const {
  InvWishartParams{psi, nu}.validate();
  if (psi.rows() != q) {
    throw DimensionError("prior Psi is " + std::to_string(psi.rows()) + " x " +
                         std::to_string(psi.cols()) + " but there are " + std::to_string(q) +
                         " responses");
  }
  if (is_flat()) return;
  if (mu_beta.rows() != p || mu_beta.cols() != q) {
    throw DimensionError("prior mean must be " + std::to_string(p) + " x " + std::to_string(q));
  }
  if (vr_factor.rows() != p || vr_factor.cols() != p) {
    throw DimensionError("prior V_r factor must be " + std::to_string(p) + " x " +
                         std::to_string(p));
  }
  CholeskyFactor check(vr_factor);
  (void)check;
}

Matrix MNIWPosterior::sigma_mean() const {
  const double q = static_cast<double>(psi.rows());
  if (!(nu > q + 1.0)) throw ParameterError("posterior mean of Sigma needs nu* > q + 1");
  return psi / (nu - q - 1.0);
}

MNIWPosterior fit_response(const Matrix& x, const Matrix& y, const VecchiaFactor& factor,
                           const PriorSpec& prior) {
  const Index n = factor.size();
  const Index p = x.cols();
  const Index q = y.cols();
  if (x.rows() != n || y.rows() != n) {
    throw DimensionError("fit_response: data have " + std::to_string(y.rows()) +
                         " rows, factor has " + std::to_string(n));
  }
  if (factor.kind != KernelKind::Response) {
    throw ParameterError("fit_response needs a response-kind factor");
  }
  if (p == 0) throw DataError("fit_response needs at least one covariate");
  prior.validate(p, q);

  const Matrix diax = whiten(factor, x);
  const Matrix diay = whiten(factor, y);

  Matrix precision = diax.transpose() * diax;
  Matrix rhs = diax.transpose() * diay;
  Matrix lr_inv;
  if (!prior.is_flat()) {
    lr_inv = triangular_solve(prior.vr_factor, Matrix::Identity(p, p));
    precision += lr_inv.transpose() * lr_inv;
    rhs += lr_inv.transpose() * (lr_inv * prior.mu_beta);
  }

  MNIWPosterior post;
  CholeskyFactor prec_factor;
  try {
    prec_factor = cholesky(precision);
  } catch (const DecompositionError& e) {
    throw DataError("whitened design is rank deficient (column " + std::to_string(e.pivot()) +
                    " of X is a combination of earlier columns)");
  }
  const Matrix& lp = prec_factor.matrix();
  const double lmax = lp.diagonal().maxCoeff();
  if (lp.diagonal().minCoeff() < 1e-10 * lmax) {
    throw DataError("whitened design is numerically rank deficient");
  }
  post.mu = cholesky_solve(prec_factor, rhs);
  // V* = (L_p L_p^T)^{-1}; its lower Cholesky factor comes from the inverse.
  post.v_factor = cholesky(symmetrize(cholesky_inverse(prec_factor)));

  const Matrix resid = diay - diax * post.mu;
  Matrix psi = prior.psi + resid.transpose() * resid;
  if (!prior.is_flat()) {
    const Matrix w = lr_inv * (post.mu - prior.mu_beta);
    psi += w.transpose() * w;
  }
  post.psi = symmetrize(psi);
  post.nu = prior.nu + static_cast<double>(n);
  try {
    (void)cholesky(post.psi);
  } catch (const DecompositionError&) {
    throw DecompositionError(0, "posterior scale Psi* is not positive definite");
  }
  return post;
}

SampleSet sample_response_posterior(const MNIWPosterior& post, Index draws, std::uint64_t seed) {
  if (draws < 0) throw ParameterError("draw count must be non-negative");
  const CholeskyFactor psi_factor = cholesky(post.psi);
  const Index p = post.mu.rows();
  const Index q = post.mu.cols();
  SampleSet s;
  s.seed = seed;
  const auto l = static_cast<std::size_t>(draws);
  s.beta.resize(l);
  s.sigma.resize(l);
  s.sigma_chol.resize(l);
  parallel_for(0, l, [&](std::size_t k) {
    RandomStream rng(seed, k, stream::kPosterior);
    s.sigma[k] = sample_inv_wishart(psi_factor, post.nu, rng);
    s.sigma_chol[k] = cholesky(s.sigma[k]).matrix();
    const Matrix u = standard_normal_matrix(p, q, rng);
    s.beta[k] = post.mu + post.v_factor.matrix() * u * s.sigma_chol[k].transpose();
  });
  return s;
}

namespace {

void check_prediction_inputs(const PredictionWeights& w, const Matrix& x_u, const Matrix& x,
                             const Matrix& y) {
  if (w.kind != KernelKind::Response) {
    throw ParameterError("response prediction needs response-kind weights");
  }
  if (x_u.rows() != w.size()) {
    throw DimensionError("prediction covariates have " + std::to_string(x_u.rows()) +
                         " rows for " + std::to_string(w.size()) + " queries");
  }
  if (x.rows() != w.a.cols() || y.rows() != w.a.cols()) {
    throw DimensionError("training blocks do not match the prediction reference set");
  }
  if (x_u.cols() != x.cols()) throw DimensionError("prediction covariates have wrong width");
}

}  // namespace

void predict_response(SampleSet& samples, const PredictionWeights& weights, const Matrix& x_u,
                      const Matrix& x, const Matrix& y, std::uint64_t seed) {
  check_prediction_inputs(weights, x_u, x, y);
  const Matrix ay = spmm(weights.a, y);
  const Matrix ax = spmm(weights.a, x);
  const Matrix xu_minus_ax = x_u - ax;
  const Vector sd = weights.d.cwiseSqrt();
  const auto l = static_cast<std::size_t>(samples.size());
  const Index q = y.cols();
  if (samples.sigma_chol.size() != l) {
    samples.sigma_chol.resize(l);
    for (std::size_t k = 0; k < l; ++k) samples.sigma_chol[k] = cholesky(samples.sigma[k]).matrix();
  }
  samples.y_pred.assign(l, Matrix());
  parallel_for(0, l, [&](std::size_t k) {
    RandomStream rng(seed, k, stream::kPredict);
    const Matrix u = standard_normal_matrix(weights.size(), q, rng);
    samples.y_pred[k] = xu_minus_ax * samples.beta[k] + ay +
                        sd.asDiagonal() * u * samples.sigma_chol[k].transpose();
  });
}

Matrix predict_response_mean(const Matrix& beta, const PredictionWeights& weights,
                             const Matrix& x_u, const Matrix& x, const Matrix& y) {
  check_prediction_inputs(weights, x_u, x, y);
  return x_u * beta + spmm(weights.a, y - x * beta);
}

}  // namespace cnngp
