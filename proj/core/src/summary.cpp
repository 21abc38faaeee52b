#include "cnngp/summary.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cnngp/error.hpp"

namespace cnngp {

void SampleSet::validate() const {
  const std::size_t l = beta.size();
  auto check = [l](const std::vector<Matrix>& v, const char* name, bool optional) {
    if (v.size() != l && !(optional && v.empty())) {
      throw DimensionError(std::string("sample set field '") + name + "' has " +
                           std::to_string(v.size()) + " draws, expected " + std::to_string(l));
    }
  };
  check(sigma, "sigma", false);
  check(sigma_chol, "sigma_chol", true);
  check(omega, "omega", true);
  check(y_pred, "y_pred", true);
  check(omega_pred, "omega_pred", true);
  for (const auto& s : sigma) {
    if (asymmetry(s) > 1e-10 * std::max(1.0, s.cwiseAbs().maxCoeff())) {
      throw DataError("sample set holds a non-symmetric sigma draw");
    }
  }
}

double sorted_quantile(const std::vector<double>& sorted, double prob) {
  if (sorted.empty()) throw DataError("quantile of an empty sample");
  if (!(prob >= 0.0 && prob <= 1.0)) throw ParameterError("quantile probability outside [0, 1]");
  const double h = prob * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

Matrix mean_of(const std::vector<Matrix>& draws) {
  if (draws.empty()) throw DataError("mean of zero draws");
  Matrix m = Matrix::Zero(draws.front().rows(), draws.front().cols());
  for (const auto& d : draws) {
    if (d.rows() != m.rows() || d.cols() != m.cols()) throw DimensionError("draws differ in shape");
    m += d;
  }
  return m / static_cast<double>(draws.size());
}

DrawSummary summarize_draws(const std::vector<Matrix>& draws, double level) {
  if (!(level > 0.0 && level < 1.0)) throw ParameterError("interval level must lie in (0, 1)");
  DrawSummary s;
  s.mean = mean_of(draws);
  const Index r = s.mean.rows();
  const Index c = s.mean.cols();
  const std::size_t l = draws.size();
  s.sd.resize(r, c);
  s.lower.resize(r, c);
  s.upper.resize(r, c);
  std::vector<double> v(l);
  const double tail = 0.5 * (1.0 - level);
  for (Index j = 0; j < c; ++j) {
    for (Index i = 0; i < r; ++i) {
      double ss = 0.0;
      for (std::size_t k = 0; k < l; ++k) {
        v[k] = draws[k](i, j);
        const double e = v[k] - s.mean(i, j);
        ss += e * e;
      }
      s.sd(i, j) = l > 1 ? std::sqrt(ss / static_cast<double>(l - 1)) : 0.0;
      std::sort(v.begin(), v.end());
      s.lower(i, j) = sorted_quantile(v, tail);
      s.upper(i, j) = sorted_quantile(v, 1.0 - tail);
    }
  }
  return s;
}

std::vector<Matrix> intercept_centered(const std::vector<Matrix>& surfaces,
                                       const std::vector<Matrix>& beta) {
  if (surfaces.size() != beta.size()) throw DimensionError("surface and beta draw counts differ");
  std::vector<Matrix> out;
  out.reserve(surfaces.size());
  for (std::size_t k = 0; k < surfaces.size(); ++k) {
    if (beta[k].rows() == 0) throw DataError("intercept-centering needs an intercept column in X");
    out.push_back(surfaces[k].rowwise() + beta[k].row(0));
  }
  return out;
}

}  // namespace cnngp
