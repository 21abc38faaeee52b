#include "cnngp/latent_model.hpp"

#include <cmath>
#include <string>

#include "cnngp/error.hpp"
#include "cnngp/parallel.hpp"
#include "cnngp/random.hpp"

namespace cnngp {

AugmentedSystem assemble_augmented(const Matrix& x, const Matrix& y, const VecchiaFactor& factor,
                                   const PriorSpec& prior, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw ParameterError("latent model needs alpha strictly inside (0, 1); got " +
                         std::to_string(alpha) + ". Use the response model for alpha = 1");
  }
  if (factor.kind != KernelKind::Latent) {
    throw ParameterError("latent model needs a latent-kind factor");
  }
  const Index n = factor.size();
  const Index p = x.cols();
  const Index q = y.cols();
  if (x.rows() != n || y.rows() != n) {
    throw DimensionError("assemble_augmented: data have " + std::to_string(y.rows()) +
                         " rows, factor has " + std::to_string(n));
  }
  prior.validate(p, q);

  AugmentedSystem s;
  s.n = n;
  s.p = p;
  s.q = q;
  s.scale = std::sqrt(alpha / (1.0 - alpha));
  s.data_rows = n;
  s.prior_beta_rows = prior.is_flat() ? 0 : p;
  s.prior_omega_rows = n;
  const Index rows = s.data_rows + s.prior_beta_rows + s.prior_omega_rows;

  SparseRowBuilder b(rows, p + n,
                     static_cast<std::size_t>(n * (p + 1) + p * p) + factor.a.nonzeros() +
                         static_cast<std::size_t>(n));
  s.ystar = Matrix::Zero(rows, q);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < p; ++j) b.push(j, s.scale * x(i, j));
    b.push(p + i, s.scale);
    b.end_row();
  }
  s.ystar.topRows(n) = s.scale * y;
  if (!prior.is_flat()) {
    const Matrix lr_inv = triangular_solve(prior.vr_factor, Matrix::Identity(p, p));
    for (Index i = 0; i < p; ++i) {
      for (Index j = 0; j <= i; ++j) b.push(j, lr_inv(i, j));
      b.end_row();
    }
    s.ystar.middleRows(n, p) = lr_inv * prior.mu_beta;
  }
  for (Index i = 0; i < n; ++i) {
    const double inv_sd = 1.0 / std::sqrt(factor.d[i]);
    const auto idx = factor.a.row_indices(i);
    const auto val = factor.a.row_values(i);
    for (std::size_t k = 0; k < idx.size(); ++k) b.push(p + idx[k], -val[k] * inv_sd);
    b.push(p + i, inv_sd);
    b.end_row();
  }
  s.xstar = b.finish();
  return s;
}

Matrix solve_augmented(const AugmentedSystem& system, const Matrix& rhs, const LsmrOptions& opts,
                       std::vector<LsmrReport>& reports, const Matrix* start) {
  if (rhs.rows() != system.xstar.rows()) {
    throw DimensionError("augmented right-hand side has " + std::to_string(rhs.rows()) +
                         " rows, system has " + std::to_string(system.xstar.rows()));
  }
  if (start && (start->rows() != system.unknowns() || start->cols() != rhs.cols())) {
    throw DimensionError("augmented starting point has the wrong shape");
  }
  const Index cols = rhs.cols();
  Matrix out(system.unknowns(), cols);
  reports.assign(static_cast<std::size_t>(cols), LsmrReport{});
  parallel_for(0, static_cast<std::size_t>(cols), [&](std::size_t uj) {
    const auto j = static_cast<Index>(uj);
    Vector b = rhs.col(j);
    if (start) b -= spmv(system.xstar, start->col(j));
    LsmrResult r = lsmr(system.xstar, b, opts);
    out.col(j) = start ? Vector(start->col(j) + r.x) : r.x;
    reports[uj] = std::move(r.report);
  });
  return out;
}

namespace {

std::string describe(const LsmrReport& r) {
  return "stop=" + to_string(r.stop) + ", iterations=" + std::to_string(r.iterations) +
         ", |r|=" + std::to_string(r.norm_r) + ", |A^T r|=" + std::to_string(r.norm_ar) +
         ", cond(A)~" + std::to_string(r.cond_a);
}

}  // namespace

LatentPosterior fit_latent(std::shared_ptr<const AugmentedSystem> system, const PriorSpec& prior,
                           const LsmrOptions& opts) {
  if (!system) throw ParameterError("fit_latent: no system");
  opts.validate();
  prior.validate(system->p, system->q);
  LatentPosterior post;
  post.mu = solve_augmented(*system, system->ystar, opts, post.reports);
  for (std::size_t j = 0; j < post.reports.size(); ++j) {
    if (!post.reports[j].converged()) {
      throw ConvergenceError("LSMR did not converge for response " + std::to_string(j + 1) +
                             " (" + describe(post.reports[j]) + ")");
    }
  }
  const Matrix u = system->ystar - spmm(system->xstar, post.mu);
  post.psi = symmetrize(prior.psi + u.transpose() * u);
  post.nu = prior.nu + static_cast<double>(system->n);
  post.system = std::move(system);
  return post;
}

SampleSet sample_latent_posterior(const LatentPosterior& post, Index draws, std::uint64_t seed,
                                  const LsmrOptions& opts) {
  if (draws < 0) throw ParameterError("draw count must be non-negative");
  if (!post.system) throw ParameterError("latent posterior has no system");
  opts.validate();
  const AugmentedSystem& sys = *post.system;
  const CholeskyFactor psi_factor = cholesky(post.psi);
  const auto l = static_cast<std::size_t>(draws);
  std::vector<Matrix> gamma(l), sigma(l), sigma_chol(l);
  std::vector<char> ok(l, 1);
  parallel_for(0, l, [&](std::size_t k) {
    RandomStream rng(seed, k, stream::kPosterior);
    sigma[k] = sample_inv_wishart(psi_factor, post.nu, rng);
    sigma_chol[k] = cholesky(sigma[k]).matrix();
    const Matrix eta = standard_normal_matrix(sys.xstar.rows(), sys.q, rng) * sigma_chol[k].transpose();
    Matrix v(sys.unknowns(), sys.q);
    // Draws already run in parallel, so the columns are solved serially here.
    for (Index j = 0; j < sys.q; ++j) {
      LsmrResult r = lsmr(sys.xstar, eta.col(j), opts);
      if (!r.report.converged()) {
        ok[k] = 0;
        return;
      }
      v.col(j) = r.x;
    }
    gamma[k] = post.mu + v;
  });
  SampleSet s;
  s.seed = seed;
  for (std::size_t k = 0; k < l; ++k) {
    if (!ok[k]) {
      ++s.excluded;
      continue;
    }
    s.beta.push_back(gamma[k].topRows(sys.p));
    s.omega.push_back(gamma[k].bottomRows(sys.n));
    s.sigma.push_back(std::move(sigma[k]));
    s.sigma_chol.push_back(std::move(sigma_chol[k]));
  }
  return s;
}

void predict_latent(SampleSet& samples, const PredictionWeights& weights, const Matrix& x_u,
                    double alpha, std::uint64_t seed) {
  if (weights.kind != KernelKind::Latent) {
    throw ParameterError("latent prediction needs latent-kind weights");
  }
  if (!(alpha > 0.0 && alpha < 1.0)) throw ParameterError("alpha must lie strictly inside (0, 1)");
  const auto l = static_cast<std::size_t>(samples.size());
  if (samples.omega.size() != l) throw DataError("latent prediction needs omega draws");
  if (x_u.rows() != weights.size()) {
    throw DimensionError("prediction covariates have " + std::to_string(x_u.rows()) +
                         " rows for " + std::to_string(weights.size()) + " queries");
  }
  if (l > 0) {
    if (samples.omega.front().rows() != weights.a.cols()) {
      throw DimensionError("omega draws do not match the prediction reference set");
    }
    if (samples.beta.front().rows() != x_u.cols()) {
      throw DimensionError("prediction covariates have wrong width");
    }
  }
  if (samples.sigma_chol.size() != l) {
    samples.sigma_chol.resize(l);
    for (std::size_t k = 0; k < l; ++k) samples.sigma_chol[k] = cholesky(samples.sigma[k]).matrix();
  }
  const Vector sd = weights.d.cwiseSqrt();
  const double noise = std::sqrt(1.0 / alpha - 1.0);
  samples.omega_pred.assign(l, Matrix());
  samples.y_pred.assign(l, Matrix());
  parallel_for(0, l, [&](std::size_t k) {
    RandomStream rng(seed, k, stream::kPredict);
    const Index q = samples.sigma[k].rows();
    const Matrix z = standard_normal_matrix(weights.size(), q, rng);
    const Matrix z2 = standard_normal_matrix(weights.size(), q, rng);
    const Matrix lt = samples.sigma_chol[k].transpose();
    samples.omega_pred[k] = spmm(weights.a, samples.omega[k]) + sd.asDiagonal() * z * lt;
    samples.y_pred[k] = x_u * samples.beta[k] + samples.omega_pred[k] + noise * (z2 * lt);
  });
}

Matrix predict_latent_mean(const Matrix& beta, const Matrix& omega,
                           const PredictionWeights& weights, const Matrix& x_u) {
  if (x_u.rows() != weights.size() || omega.rows() != weights.a.cols() ||
      beta.rows() != x_u.cols()) {
    throw DimensionError("predict_latent_mean: shapes do not agree");
  }
  return x_u * beta + spmm(weights.a, omega);
}

}  // namespace cnngp
