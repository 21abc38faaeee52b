#pragma once

#include <cstdint>
#include <vector>

#include "cnngp/linalg.hpp"

namespace cnngp {

/// Posterior (and optionally predictive) draws. All vectors hold one entry per
/// kept draw; optional fields are either empty or the same length as `beta`.
struct SampleSet {
  std::vector<Matrix> beta;        ///< p x q
  std::vector<Matrix> sigma;       ///< q x q
  std::vector<Matrix> sigma_chol;  ///< lower Cholesky factor of each sigma
  std::vector<Matrix> omega;       ///< n x q latent surface at training sites (model order)
  std::vector<Matrix> y_pred;      ///< n' x q predictive responses
  std::vector<Matrix> omega_pred;  ///< n' x q predictive latent surface

  std::uint64_t seed = 0;
  /// Draws dropped because an iterative solve did not converge.
  Index excluded = 0;

  Index size() const { return static_cast<Index>(beta.size()); }
  /// Field lengths agree and every sigma is symmetric.
  void validate() const;
};

/// Entrywise mean, standard deviation (denominator L - 1) and central interval
/// bounds from empirical quantiles of a set of equally shaped draws.
struct DrawSummary {
  Matrix mean;
  Matrix sd;
  Matrix lower;
  Matrix upper;
};

/// Quantile of sorted data by linear interpolation between order statistics
/// (the usual "type 7" definition).
double sorted_quantile(const std::vector<double>& sorted, double prob);

DrawSummary summarize_draws(const std::vector<Matrix>& draws, double level = 0.95);

/// Entrywise mean of draws.
Matrix mean_of(const std::vector<Matrix>& draws);

/// Adds the intercept draw (row 0 of beta) to every row of each surface draw.
std::vector<Matrix> intercept_centered(const std::vector<Matrix>& surfaces,
                                       const std::vector<Matrix>& beta);

}  // namespace cnngp
