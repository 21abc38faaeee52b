#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "cnngp/linalg.hpp"
#include "cnngp/response_model.hpp"
#include "cnngp/sparse.hpp"
#include "cnngp/summary.hpp"
#include "cnngp/vecchia.hpp"

namespace cnngp {

/// Stacked least-squares system X* gamma = Y* for gamma = [beta; omega].
///
/// Row blocks, top to bottom:
///   data        c [X : I]          n rows, c = sqrt(alpha / (1 - alpha))
///   prior beta  [L_r^{-1} : 0]     p rows (absent for a flat prior)
///   prior omega [0 : V_rho]        n rows, V_rho = D^{-1/2} (I - A)
struct AugmentedSystem {
  SparseRowMatrix xstar;
  Matrix ystar;
  double scale = 0.0;
  Index n = 0;
  Index p = 0;
  Index q = 0;
  Index data_rows = 0;
  Index prior_beta_rows = 0;
  Index prior_omega_rows = 0;

  Index unknowns() const { return p + n; }
};

/// `x`, `y` in the factor's (model) order. Requires a latent-kind factor and
/// alpha strictly inside (0, 1).
AugmentedSystem assemble_augmented(const Matrix& x, const Matrix& y, const VecchiaFactor& factor,
                                   const PriorSpec& prior, double alpha);

/// Posterior {gamma, Sigma}: mu* solves the normal equations of the augmented
/// system column by column; Psi* = Psi + U^T U with U = Y* - X* mu*.
struct LatentPosterior {
  Matrix mu;  ///< (p + n) x q
  Matrix psi;
  double nu = 0.0;
  std::shared_ptr<const AugmentedSystem> system;
  std::vector<LsmrReport> reports;  ///< one per response column

  Matrix beta() const { return mu.topRows(system->p); }
  Matrix omega() const { return mu.bottomRows(system->n); }
};

/// Least-squares solve of X* Z = B per column. `start`, when given, is used
/// as the initial iterate (the solver works on the correction). Columns run in
/// parallel; reports are returned in column order.
Matrix solve_augmented(const AugmentedSystem& system, const Matrix& rhs, const LsmrOptions& opts,
                       std::vector<LsmrReport>& reports, const Matrix* start = nullptr);

/// Throws ConvergenceError (with the solver report) if a column fails.
LatentPosterior fit_latent(std::shared_ptr<const AugmentedSystem> system, const PriorSpec& prior,
                           const LsmrOptions& opts = {});

/// Per draw: Sigma ~ IW(Psi*, nu*), eta = U L_Sigma^T, v = argmin ||X* v - eta||,
/// gamma = mu* + v. Draws whose solve fails to converge are dropped and
/// counted in `excluded`.
SampleSet sample_latent_posterior(const LatentPosterior& post, Index draws, std::uint64_t seed,
                                  const LsmrOptions& opts = {});

/// Fills `omega_pred` and `y_pred`: omega_U = A~ omega + D~^{1/2} Z L_Sigma^T and
/// Y_U = X_U beta + omega_U + sqrt(1/alpha - 1) Z' L_Sigma^T.
void predict_latent(SampleSet& samples, const PredictionWeights& weights, const Matrix& x_u,
                    double alpha, std::uint64_t seed);

/// Plug-in predictive mean X_U beta + A~ omega.
Matrix predict_latent_mean(const Matrix& beta, const Matrix& omega,
                           const PredictionWeights& weights, const Matrix& x_u);

}  // namespace cnngp
