#include "cnngp/metrics.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "cnngp/error.hpp"

namespace cnngp {

namespace {

void check_same_shape(const Matrix& a, const Matrix& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError(std::string(what) + ": shapes " + std::to_string(a.rows()) + "x" +
                         std::to_string(a.cols()) + " and " + std::to_string(b.rows()) + "x" +
                         std::to_string(b.cols()) + " differ");
  }
  if (a.size() == 0) throw DataError(std::string(what) + ": empty input");
}

ResponseScores column_means(const Matrix& values) {
  ResponseScores s;
  s.per_response = values.colwise().mean().transpose();
  s.combined = values.mean();
  return s;
}

}  // namespace

ResponseScores rmspe(const Matrix& truth, const Matrix& predicted) {
  check_same_shape(truth, predicted, "rmspe");
  ResponseScores s = column_means((truth - predicted).array().square().matrix());
  s.per_response = s.per_response.cwiseSqrt();
  s.combined = std::sqrt(s.combined);
  return s;
}

ResponseScores coverage(const Matrix& truth, const Matrix& lower, const Matrix& upper) {
  check_same_shape(truth, lower, "coverage");
  check_same_shape(truth, upper, "coverage");
  Matrix hit(truth.rows(), truth.cols());
  for (Index j = 0; j < truth.cols(); ++j) {
    for (Index i = 0; i < truth.rows(); ++i) {
      if (lower(i, j) > upper(i, j)) {
        throw DataError("coverage: lower bound exceeds upper bound at row " +
                        std::to_string(i + 1) + ", column " + std::to_string(j + 1));
      }
      hit(i, j) = lower(i, j) <= truth(i, j) && truth(i, j) <= upper(i, j) ? 1.0 : 0.0;
    }
  }
  return column_means(hit);
}

double negated_crps(double truth, double mean, double sd) {
  if (!(sd > 0.0)) throw ParameterError("predictive standard deviation must be positive");
  const double z = (truth - mean) / sd;
  const double pdf = std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
  const double cdf = 0.5 * std::erfc(-z / std::numbers::sqrt2);
  return sd * (1.0 / std::sqrt(std::numbers::pi) - 2.0 * pdf - z * (2.0 * cdf - 1.0));
}

ResponseScores mcrps(const Matrix& truth, const Matrix& mean, const Matrix& sd) {
  check_same_shape(truth, mean, "mcrps");
  check_same_shape(truth, sd, "mcrps");
  Matrix score(truth.rows(), truth.cols());
  for (Index j = 0; j < truth.cols(); ++j) {
    for (Index i = 0; i < truth.rows(); ++i) score(i, j) = negated_crps(truth(i, j), mean(i, j), sd(i, j));
  }
  return column_means(score);
}

ResponseScores msel(const Matrix& truth_centered, const Matrix& estimate_centered) {
  check_same_shape(truth_centered, estimate_centered, "msel");
  return column_means((truth_centered - estimate_centered).array().square().matrix());
}

Matrix center_by_intercept(const Matrix& omega, const Matrix& beta) {
  if (beta.rows() == 0 || beta.cols() != omega.cols()) {
    throw DimensionError("center_by_intercept: beta must have an intercept row and q columns");
  }
  return omega.rowwise() + beta.row(0);
}

}  // namespace cnngp
