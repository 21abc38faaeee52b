#include "cnngp/vecchia.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "cnngp/error.hpp"
#include "cnngp/parallel.hpp"

namespace cnngp {

std::string to_string(KernelKind kind) {
  return kind == KernelKind::Response ? "response" : "latent";
}

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw ParameterError("alpha must lie in (0, 1], got " + std::to_string(alpha));
  }
}

double kernel_diagonal(KernelKind kind, double alpha) {
  return kind == KernelKind::Response ? 1.0 / alpha : 1.0;
}

double kernel_nugget(KernelKind kind, double alpha) {
  return kind == KernelKind::Response ? 1.0 / alpha - 1.0 : 0.0;
}

namespace {

// Conditional regression of one target on its m neighbors.
//
// On entry `cov` holds the m x m neighbor covariance (row-major, lower part
// used) and `rhs` the covariances with the target. On exit `rhs` holds the
// weights. Returns the conditional variance, or NaN if `cov` is not positive
// definite.
double solve_row(std::vector<double>& cov, std::vector<double>& rhs, std::size_t m,
                 double diag) {
  for (std::size_t j = 0; j < m; ++j) {
    double s = cov[j * m + j];
    for (std::size_t k = 0; k < j; ++k) s -= cov[j * m + k] * cov[j * m + k];
    if (!(s > 0.0)) return std::nan("");
    const double ljj = std::sqrt(s);
    cov[j * m + j] = ljj;
    for (std::size_t i = j + 1; i < m; ++i) {
      double t = cov[i * m + j];
      for (std::size_t k = 0; k < j; ++k) t -= cov[i * m + k] * cov[j * m + k];
      cov[i * m + j] = t / ljj;
    }
  }
  // w = L^{-1} c
  for (std::size_t i = 0; i < m; ++i) {
    double t = rhs[i];
    for (std::size_t k = 0; k < i; ++k) t -= cov[i * m + k] * rhs[k];
    rhs[i] = t / cov[i * m + i];
  }
  double explained = 0.0;
  for (std::size_t i = 0; i < m; ++i) explained += rhs[i] * rhs[i];
  // a = L^{-T} w
  for (std::size_t ii = m; ii-- > 0;) {
    double t = rhs[ii];
    for (std::size_t k = ii + 1; k < m; ++k) t -= cov[k * m + ii] * rhs[k];
    rhs[ii] = t / cov[ii * m + ii];
  }
  return diag - explained;
}

struct RowResult {
  std::vector<double> weights;
  double variance = 0.0;
};

[[noreturn]] void fail_row(Index i, const std::string& what) {
  throw DecompositionError(static_cast<std::size_t>(i + 1),
                           "vecchia: " + what + " at row " + std::to_string(i + 1) +
                               " (near-duplicate locations?)");
}

// Shared driver: `fill(i, cov, rhs)` writes the neighbor covariances of row i.
template <typename Fill>
std::vector<RowResult> solve_rows(const NeighborGraph& graph, double diag, bool allow_zero,
                                  Fill&& fill) {
  const Index rows = graph.size();
  std::vector<RowResult> out(static_cast<std::size_t>(rows));
  parallel_for(0, static_cast<std::size_t>(rows), [&](std::size_t ui) {
    const Index i = static_cast<Index>(ui);
    const auto nb = graph.neighbors(i);
    const std::size_t m = nb.size();
    RowResult& r = out[ui];
    if (m == 0) {
      r.variance = diag;
      return;
    }
    std::vector<double> cov(m * m);
    r.weights.resize(m);
    fill(i, cov, r.weights);
    const double var = solve_row(cov, r.weights, m, diag);
    if (std::isnan(var)) fail_row(i, "neighbor covariance is not positive definite");
    if (var > 0.0) {
      r.variance = var;
    } else if (allow_zero && var > -1e-10 * diag) {
      r.variance = 0.0;  // query coincides with a reference site
    } else {
      fail_row(i, "conditional variance " + std::to_string(var) + " is not positive");
    }
  });
  return out;
}

SparseRowMatrix pack_weights(const NeighborGraph& graph, Index cols,
                             const std::vector<RowResult>& rows) {
  SparseRowBuilder b(graph.size(), cols, graph.total_edges());
  for (Index i = 0; i < graph.size(); ++i) {
    const auto nb = graph.neighbors(i);
    const auto& w = rows[static_cast<std::size_t>(i)].weights;
    for (std::size_t k = 0; k < nb.size(); ++k) b.push(nb[k], w[k]);
    b.end_row();
  }
  return b.finish();
}

Vector pack_variances(const std::vector<RowResult>& rows) {
  Vector d(static_cast<Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) d[static_cast<Index>(i)] = rows[i].variance;
  return d;
}

void check_training_graph(const NeighborGraph& graph) {
  if (graph.mode() != NeighborMode::Training) {
    throw ParameterError("build_factor requires a training-mode neighbor graph");
  }
}

void check_prediction_graph(const NeighborGraph& graph) {
  if (graph.mode() != NeighborMode::Prediction) {
    throw ParameterError("prediction weights require a prediction-mode neighbor graph");
  }
}

// Covariances of row i from coordinates: kernel(dist) with nugget on the diagonal.
template <typename Kernel>
auto coordinate_filler(const NeighborGraph& graph, const Matrix& ref, const Matrix& targets,
                       Kernel kernel, double nugget) {
  return [&graph, &ref, &targets, kernel, nugget](Index i, std::vector<double>& cov,
                                                  std::vector<double>& rhs) {
    const auto nb = graph.neighbors(i);
    const std::size_t m = nb.size();
    for (std::size_t a = 0; a < m; ++a) {
      cov[a * m + a] = kernel(0.0) + nugget;
      for (std::size_t b = 0; b < a; ++b) {
        cov[a * m + b] = kernel((ref.row(nb[a]) - ref.row(nb[b])).norm());
      }
      rhs[a] = kernel((ref.row(nb[a]) - targets.row(i)).norm());
    }
  };
}

template <typename Kernel>
auto distance_filler(const NeighborDistances& dist, Kernel kernel, double nugget) {
  return [&dist, kernel, nugget](Index i, std::vector<double>& cov, std::vector<double>& rhs) {
    const std::size_t m = dist.graph().neighbors(i).size();
    const double* v = dist.row(i);
    std::size_t t = 0;
    for (std::size_t a = 0; a < m; ++a) {
      for (std::size_t b = 0; b < a; ++b) cov[a * m + b] = kernel(v[t++]);
      cov[a * m + a] = kernel(v[t++]) + nugget;
    }
    for (std::size_t a = 0; a < m; ++a) rhs[a] = kernel(v[t++]);
  };
}

}  // namespace

VecchiaFactor build_factor(const NeighborGraph& graph, const Matrix& coords,
                           const CorrelationModel& corr, double alpha, KernelKind kind) {
  check_training_graph(graph);
  corr.validate();
  if (kind == KernelKind::Response) check_alpha(alpha);
  const double eff_alpha = kind == KernelKind::Response ? alpha : 1.0;
  if (coords.rows() != graph.size()) throw DimensionError("build_factor: graph/coordinate size mismatch");
  const double diag = kernel_diagonal(kind, eff_alpha);
  const double nugget = kernel_nugget(kind, eff_alpha);
  auto rows = solve_rows(graph, diag, false, coordinate_filler(graph, coords, coords, corr, nugget));
  return VecchiaFactor{pack_weights(graph, graph.size(), rows), pack_variances(rows), kind,
                       eff_alpha};
}

VecchiaFactor build_factor(const NeighborGraph& graph, const LocationSet& locations,
                           const CorrelationModel& corr, double alpha, KernelKind kind) {
  return build_factor(graph, locations.coords(), corr, alpha, kind);
}

PredictionWeights build_prediction_weights(const NeighborGraph& graph, const Matrix& reference,
                                           const Matrix& queries, const CorrelationModel& corr,
                                           double alpha, KernelKind kind) {
  check_prediction_graph(graph);
  corr.validate();
  if (kind == KernelKind::Response) check_alpha(alpha);
  const double eff_alpha = kind == KernelKind::Response ? alpha : 1.0;
  if (queries.rows() != graph.size() || reference.rows() != graph.reference_size()) {
    throw DimensionError("build_prediction_weights: graph/coordinate size mismatch");
  }
  const double diag = kernel_diagonal(kind, eff_alpha);
  const double nugget = kernel_nugget(kind, eff_alpha);
  auto rows = solve_rows(graph, diag, true, coordinate_filler(graph, reference, queries, corr, nugget));
  return PredictionWeights{pack_weights(graph, reference.rows(), rows), pack_variances(rows),
                           kind, eff_alpha};
}

NeighborDistances::NeighborDistances(const NeighborGraph& graph, const Matrix& reference,
                                     const Matrix& targets)
    : graph_(&graph) {
  if (targets.rows() != graph.size() || reference.rows() != graph.reference_size()) {
    throw DimensionError("neighbor distances: graph/coordinate size mismatch");
  }
  offsets_.resize(static_cast<std::size_t>(graph.size()) + 1, 0);
  for (Index i = 0; i < graph.size(); ++i) {
    const std::size_t m = graph.neighbors(i).size();
    offsets_[static_cast<std::size_t>(i) + 1] = offsets_[static_cast<std::size_t>(i)] + m * (m + 1) / 2 + m;
  }
  values_.resize(offsets_.back());
  for (Index i = 0; i < graph.size(); ++i) {
    const auto nb = graph.neighbors(i);
    double* v = values_.data() + offsets_[static_cast<std::size_t>(i)];
    std::size_t t = 0;
    for (std::size_t a = 0; a < nb.size(); ++a) {
      for (std::size_t b = 0; b < a; ++b) v[t++] = (reference.row(nb[a]) - reference.row(nb[b])).norm();
      v[t++] = 0.0;
    }
    for (std::size_t a = 0; a < nb.size(); ++a) v[t++] = (reference.row(nb[a]) - targets.row(i)).norm();
  }
}

NeighborDistances NeighborDistances::correlations(const CorrelationModel& corr) const {
  if (correlations_) throw ParameterError("table already holds correlations");
  corr.validate();
  NeighborDistances out;
  out.graph_ = graph_;
  out.offsets_ = offsets_;
  out.values_.resize(values_.size());
  for (std::size_t k = 0; k < values_.size(); ++k) out.values_[k] = corr(values_[k]);
  out.correlations_ = true;
  return out;
}

namespace {

double effective_alpha(double alpha, KernelKind kind) {
  if (kind == KernelKind::Response) check_alpha(alpha);
  return kind == KernelKind::Response ? alpha : 1.0;
}

template <typename Kernel>
VecchiaFactor factor_from_table(const NeighborDistances& dist, Kernel kernel, double alpha,
                                KernelKind kind) {
  const NeighborGraph& graph = dist.graph();
  check_training_graph(graph);
  const double a = effective_alpha(alpha, kind);
  auto rows = solve_rows(graph, kernel_diagonal(kind, a), false,
                         distance_filler(dist, kernel, kernel_nugget(kind, a)));
  return VecchiaFactor{pack_weights(graph, graph.size(), rows), pack_variances(rows), kind, a};
}

template <typename Kernel>
PredictionWeights weights_from_table(const NeighborDistances& dist, Kernel kernel, double alpha,
                                     KernelKind kind) {
  const NeighborGraph& graph = dist.graph();
  check_prediction_graph(graph);
  const double a = effective_alpha(alpha, kind);
  auto rows = solve_rows(graph, kernel_diagonal(kind, a), true,
                         distance_filler(dist, kernel, kernel_nugget(kind, a)));
  return PredictionWeights{pack_weights(graph, graph.reference_size(), rows),
                           pack_variances(rows), kind, a};
}

const NeighborDistances& require(const NeighborDistances& t, bool correlations) {
  if (t.holds_correlations() != correlations) {
    throw ParameterError(correlations ? "expected a correlation table" : "expected a distance table");
  }
  return t;
}

struct Identity {
  double operator()(double v) const { return v; }
};

}  // namespace

VecchiaFactor build_factor(const NeighborDistances& dist, const CorrelationModel& corr,
                           double alpha, KernelKind kind) {
  corr.validate();
  return factor_from_table(require(dist, false), corr, alpha, kind);
}

PredictionWeights build_prediction_weights(const NeighborDistances& dist,
                                           const CorrelationModel& corr, double alpha,
                                           KernelKind kind) {
  corr.validate();
  return weights_from_table(require(dist, false), corr, alpha, kind);
}

VecchiaFactor build_factor(const NeighborDistances& table, double alpha, KernelKind kind) {
  return factor_from_table(require(table, true), Identity{}, alpha, kind);
}

PredictionWeights build_prediction_weights(const NeighborDistances& table, double alpha,
                                           KernelKind kind) {
  return weights_from_table(require(table, true), Identity{}, alpha, kind);
}

Matrix whiten(const VecchiaFactor& factor, const Matrix& b) {
  const Index n = factor.size();
  if (b.rows() != n) {
    throw DimensionError("whiten: matrix has " + std::to_string(b.rows()) + " rows, factor is " +
                         std::to_string(n));
  }
  Matrix out(n, b.cols());
  for (Index i = 0; i < n; ++i) {
    out.row(i) = b.row(i);
    const auto idx = factor.a.row_indices(i);
    const auto val = factor.a.row_values(i);
    for (std::size_t k = 0; k < idx.size(); ++k) out.row(i) -= val[k] * b.row(idx[k]);
    out.row(i) /= std::sqrt(factor.d[i]);
  }
  return out;
}

Matrix apply_vrho(const VecchiaFactor& factor, const Matrix& b) {
  if (factor.kind != KernelKind::Latent) {
    throw ParameterError("apply_vrho requires a latent-kind factor");
  }
  return whiten(factor, b);
}

SparseRowMatrix vrho_matrix(const VecchiaFactor& factor) {
  const Index n = factor.size();
  SparseRowBuilder b(n, n, factor.a.nonzeros() + static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) {
    const double s = 1.0 / std::sqrt(factor.d[i]);
    const auto idx = factor.a.row_indices(i);
    const auto val = factor.a.row_values(i);
    for (std::size_t k = 0; k < idx.size(); ++k) b.push(idx[k], -val[k] * s);
    b.push(i, s);  // strictly lower part precedes the diagonal
    b.end_row();
  }
  return b.finish();
}

Matrix dense_precision(const VecchiaFactor& factor) {
  const Index n = factor.size();
  Matrix w = Matrix::Identity(n, n) - factor.a.to_dense();
  Matrix scaled = factor.d.cwiseSqrt().cwiseInverse().asDiagonal() * w;
  return scaled.transpose() * scaled;
}

VecchiaFactor factor_from_covariance(const Matrix& cov, const NeighborGraph& graph) {
  check_training_graph(graph);
  if (cov.rows() != cov.cols() || cov.rows() != graph.size()) {
    throw DimensionError("factor_from_covariance: covariance/graph size mismatch");
  }
  const Index n = graph.size();
  std::vector<RowResult> rows(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) {
    const auto nb = graph.neighbors(i);
    const std::size_t m = nb.size();
    RowResult& r = rows[static_cast<std::size_t>(i)];
    if (m == 0) {
      r.variance = cov(i, i);
      continue;
    }
    std::vector<double> c(m * m);
    r.weights.resize(m);
    for (std::size_t a = 0; a < m; ++a) {
      for (std::size_t b = 0; b <= a; ++b) c[a * m + b] = cov(nb[a], nb[b]);
      r.weights[a] = cov(nb[a], i);
    }
    r.variance = solve_row(c, r.weights, m, cov(i, i));
    if (!(r.variance > 0.0)) fail_row(i, "conditional variance is not positive");
  }
  return VecchiaFactor{pack_weights(graph, n, rows), pack_variances(rows), KernelKind::Latent,
                       1.0};
}

}  // namespace cnngp
