#pragma once

#include <cstdint>

#include "cnngp/linalg.hpp"
#include "cnngp/summary.hpp"
#include "cnngp/vecchia.hpp"

namespace cnngp {

/// MNIW prior on {beta, Sigma}. A flat prior drops the V_r^{-1} and mu_beta
/// terms entirely.
struct PriorSpec {
  enum class Mode { Flat, Proper };

  Mode mode = Mode::Flat;
  Matrix mu_beta;    ///< p x q (proper only)
  Matrix vr_factor;  ///< lower Cholesky factor L_r of V_r (proper only)
  Matrix psi;        ///< q x q
  double nu = 0.0;

  /// Flat beta, Psi = I_q, nu = q + 1.
  static PriorSpec flat(Index q);
  /// Factors `v_r` (p x p SPD).
  static PriorSpec proper(Matrix mu_beta, const Matrix& v_r, Matrix psi, double nu);

  bool is_flat() const { return mode == Mode::Flat; }
  void validate(Index p, Index q) const;
};

/// Closed-form posterior MNIW(mu*, V*, Psi*, nu*).
struct MNIWPosterior {
  Matrix mu;                ///< p x q
  CholeskyFactor v_factor;  ///< L with V* = L L^T
  Matrix psi;               ///< q x q
  double nu = 0.0;

  Matrix v() const { return v_factor.reconstruct(); }
  /// E[Sigma | Y] = Psi* / (nu* - q - 1); requires nu* > q + 1.
  Matrix sigma_mean() const;
};

/// Fits the response model with precision (I - A)^T D^{-1} (I - A).
/// `x` (n x p) and `y` (n x q) must be in the factor's (model) order.
/// Throws DataError when the whitened design is rank deficient.
MNIWPosterior fit_response(const Matrix& x, const Matrix& y, const VecchiaFactor& factor,
                           const PriorSpec& prior);

/// Exact draws: Sigma ~ IW(Psi*, nu*), then beta = mu* + L_v* U L_Sigma^T.
/// Draw l uses its own stream derived from (seed, l), so results do not
/// depend on the thread count.
SampleSet sample_response_posterior(const MNIWPosterior& post, Index draws, std::uint64_t seed);

/// Fills `samples.y_pred` with, per draw,
/// Y_U = X_U beta + A~ (Y - X beta) + D~^{1/2} U L_Sigma^T.
/// `x` and `y` are the training blocks in model order.
void predict_response(SampleSet& samples, const PredictionWeights& weights, const Matrix& x_u,
                      const Matrix& x, const Matrix& y, std::uint64_t seed);

/// Plug-in predictive mean X_U beta + A~ (Y - X beta).
Matrix predict_response_mean(const Matrix& beta, const PredictionWeights& weights,
                             const Matrix& x_u, const Matrix& x, const Matrix& y);

}  // namespace cnngp
