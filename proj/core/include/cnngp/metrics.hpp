#pragma once

#include <optional>

#include "cnngp/linalg.hpp"

namespace cnngp {

/// A score per response column plus the value pooled over all entries.
struct ResponseScores {
  Vector per_response;
  double combined = 0.0;
};

/// Root mean squared prediction error; pooled value is sqrt(sum / (n' q)).
ResponseScores rmspe(const Matrix& truth, const Matrix& predicted);

/// Fraction of entries with lower <= truth <= upper (closed intervals).
ResponseScores coverage(const Matrix& truth, const Matrix& lower, const Matrix& upper);

/// sigma [1/sqrt(pi) - 2 phi(z) - z (2 Phi(z) - 1)], z = (truth - mean) / sigma.
/// This is the negated CRPS of a normal forecast: values are <= 0 and larger
/// (closer to zero) is better.
double negated_crps(double truth, double mean, double sd);

/// Mean of negated_crps over sites (per response) and over all entries.
ResponseScores mcrps(const Matrix& truth, const Matrix& mean, const Matrix& sd);

/// Mean squared error between two intercept-centered latent surfaces; pooled
/// value divides by n q.
ResponseScores msel(const Matrix& truth_centered, const Matrix& estimate_centered);

/// omega + 1 beta_row0^T: adds the intercept coefficients to each row.
Matrix center_by_intercept(const Matrix& omega, const Matrix& beta);

struct MetricsReport {
  Index sites = 0;
  Index responses = 0;
  ResponseScores rmspe;
  std::optional<ResponseScores> cvg;
  std::optional<ResponseScores> cvgl;
  std::optional<ResponseScores> mcrps;
  std::optional<ResponseScores> msel;
};

}  // namespace cnngp
