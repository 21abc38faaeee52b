#include "cnngp/crossval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <optional>
#include <string>

#include "cnngp/error.hpp"
#include "cnngp/latent_model.hpp"
#include "cnngp/parallel.hpp"
#include "cnngp/random.hpp"
#include "cnngp/response_model.hpp"

namespace cnngp {

std::vector<Index> make_folds(Index n, Index k, std::uint64_t seed) {
  if (k < 2) throw ParameterError("cross-validation needs at least 2 folds");
  if (k > n) {
    throw ParameterError("cannot split " + std::to_string(n) + " sites into " +
                         std::to_string(k) + " folds");
  }
  RandomStream rng(seed, 0, stream::kFolds);
  const auto perm = random_permutation(n, rng);
  std::vector<Index> label(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) label[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])] = i % k;
  return label;
}

namespace {

// Everything about one fold that does not depend on (phi, alpha).
struct FoldPlan {
  LocationSet locations;
  Matrix x;
  Matrix y;
  Matrix test_coords;
  Matrix test_x;
  Matrix test_y;
  NeighborGraph train_graph;
  NeighborGraph test_graph;
  std::unique_ptr<NeighborDistances> train_dist;
  std::unique_ptr<NeighborDistances> test_dist;
};

std::vector<FoldPlan> plan_folds(const Dataset& data, const std::vector<Index>& folds,
                                 const CvOptions& opts) {
  if (static_cast<Index>(folds.size()) != data.size()) {
    throw DimensionError("fold labels do not match the number of sites");
  }
  Index k = 0;
  for (Index f : folds) {
    if (f < 0) throw ParameterError("fold labels must be non-negative");
    k = std::max(k, f + 1);
  }
  if (k < 2) throw ParameterError("cross-validation needs at least 2 folds");
  std::vector<FoldPlan> plans(static_cast<std::size_t>(k));
  parallel_for(0, static_cast<std::size_t>(k), [&](std::size_t uf) {
    const auto f = static_cast<Index>(uf);
    std::vector<Index> train, test;
    for (Index i = 0; i < data.size(); ++i) (folds[static_cast<std::size_t>(i)] == f ? test : train).push_back(i);
    if (test.empty()) throw ParameterError("fold " + std::to_string(f + 1) + " is empty");
    if (train.empty()) throw ParameterError("fold " + std::to_string(f + 1) + " leaves no training sites");
    const Dataset tr = data.subset(train);
    const Dataset te = data.subset(test);
    FoldPlan& p = plans[uf];
    p.locations = LocationSet::create(tr.coords, opts.ordering);
    p.x = p.locations.to_model_order(tr.x);
    p.y = p.locations.to_model_order(tr.y);
    p.test_coords = te.coords;
    p.test_x = te.x;
    p.test_y = te.y;
    p.train_graph = build_training_neighbors(p.locations, opts.neighbors);
    p.test_graph = build_prediction_neighbors(p.locations, te.coords, opts.neighbors);
    p.train_dist = std::make_unique<NeighborDistances>(p.train_graph, p.locations.coords(),
                                                       p.locations.coords());
    p.test_dist = std::make_unique<NeighborDistances>(p.test_graph, p.locations.coords(),
                                                      te.coords);
  });
  return plans;
}

double fold_rmspe(const Matrix& truth, const Matrix& pred) {
  return std::sqrt((truth - pred).squaredNorm() / static_cast<double>(truth.size()));
}

// Scores one phi over all alphas. Latent fits warm-start from the previous
// alpha's solution on the same fold.
struct PhiCorrelations {
  std::vector<NeighborDistances> train;
  std::vector<NeighborDistances> test;
};

PhiCorrelations correlations_for(const std::vector<FoldPlan>& plans, double phi) {
  const auto corr = CorrelationModel::exponential(phi);
  PhiCorrelations c;
  for (const auto& p : plans) {
    c.train.push_back(p.train_dist->correlations(corr));
    c.test.push_back(p.test_dist->correlations(corr));
  }
  return c;
}

double response_fold(const FoldPlan& p, const NeighborDistances& train,
                     const NeighborDistances& test, double alpha, const PriorSpec& prior) {
  const VecchiaFactor f = build_factor(train, alpha, KernelKind::Response);
  const MNIWPosterior post = fit_response(p.x, p.y, f, prior);
  const PredictionWeights w = build_prediction_weights(test, alpha, KernelKind::Response);
  return fold_rmspe(p.test_y, predict_response_mean(post.mu, w, p.test_x, p.x, p.y));
}

double latent_fold(const FoldPlan& p, const VecchiaFactor& f, const PredictionWeights& w,
                   double alpha, const PriorSpec& prior, const LsmrOptions& opts, Matrix& warm) {
  const AugmentedSystem sys = assemble_augmented(p.x, p.y, f, prior, alpha);
  std::vector<LsmrReport> reports;
  const bool use_warm = warm.rows() == sys.unknowns() && warm.cols() == sys.q;
  Matrix mu = solve_augmented(sys, sys.ystar, opts, reports, use_warm ? &warm : nullptr);
  for (std::size_t j = 0; j < reports.size(); ++j) {
    if (!reports[j].converged()) {
      throw ConvergenceError("LSMR did not converge for response " + std::to_string(j + 1) +
                             " (stop=" + to_string(reports[j].stop) + ")");
    }
  }
  warm = mu;
  return fold_rmspe(p.test_y, predict_latent_mean(mu.topRows(sys.p), mu.bottomRows(sys.n), w, p.test_x));
}

struct CellOutcome {
  double score = std::numeric_limits<double>::quiet_NaN();
  std::string error;
  Vector folds;
};

std::vector<CellOutcome> score_row(const std::vector<FoldPlan>& plans, double phi,
                                   const std::vector<double>& alphas, KernelKind kind,
                                   const CvOptions& opts, const PriorSpec& prior) {
  std::vector<CellOutcome> out(alphas.size());
  PhiCorrelations corr;
  try {
    corr = correlations_for(plans, phi);
  } catch (const Error& e) {
    for (auto& c : out) c.error = e.what();
    return out;
  }
  const std::size_t k = plans.size();
  for (auto& c : out) c.folds = Vector::Zero(static_cast<Index>(k));
  std::vector<char> failed(alphas.size(), 0);

  for (std::size_t f = 0; f < k; ++f) {
    // Latent-kind factors and weights do not depend on alpha.
    std::optional<VecchiaFactor> latent_f;
    std::optional<PredictionWeights> latent_w;
    Matrix warm;
    for (std::size_t a = 0; a < alphas.size(); ++a) {
      if (failed[a]) continue;
      try {
        double r;
        if (kind == KernelKind::Response) {
          r = response_fold(plans[f], corr.train[f], corr.test[f], alphas[a], prior);
        } else {
          if (!latent_f) {
            latent_f = build_factor(corr.train[f], 1.0, KernelKind::Latent);
            latent_w = build_prediction_weights(corr.test[f], 1.0, KernelKind::Latent);
          }
          r = latent_fold(plans[f], *latent_f, *latent_w, alphas[a], prior, opts.lsmr, warm);
        }
        out[a].folds[static_cast<Index>(f)] = r;
      } catch (const Error& e) {
        failed[a] = 1;
        out[a].error = "fold " + std::to_string(f + 1) + ": " + e.what();
      }
    }
  }
  for (std::size_t a = 0; a < alphas.size(); ++a) {
    if (!failed[a]) out[a].score = out[a].folds.sum();
  }
  return out;
}

PriorSpec cv_prior(const Dataset& data) { return PriorSpec::flat(data.responses()); }

void check_kind_alpha(double alpha, KernelKind kind) {
  check_alpha(alpha);
  if (kind == KernelKind::Latent && alpha >= 1.0) {
    throw ParameterError("latent cross-validation needs alpha < 1");
  }
}

}  // namespace

double cv_score(const Dataset& data, double phi, double alpha, const std::vector<Index>& folds,
                KernelKind kind, const CvOptions& opts) {
  data.validate();
  CorrelationModel::exponential(phi).validate();
  check_kind_alpha(alpha, kind);
  const auto plans = plan_folds(data, folds, opts);
  const auto row = score_row(plans, phi, {alpha}, kind, opts, cv_prior(data));
  if (!row[0].error.empty()) throw DataError("cross-validation failed at " + row[0].error);
  return row[0].score;
}

double cv_score(const Dataset& data, double phi, double alpha, Index k, KernelKind kind,
                std::uint64_t seed, const CvOptions& opts) {
  return cv_score(data, phi, alpha, make_folds(data.size(), k, seed), kind, opts);
}

std::vector<double> linspace(double lo, double hi, Index count) {
  if (count < 1) throw ParameterError("grid needs at least one value per axis");
  if (count == 1) return {lo};
  std::vector<double> v(static_cast<std::size_t>(count));
  for (Index i = 0; i < count; ++i) {
    v[static_cast<std::size_t>(i)] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
  }
  v.back() = hi;
  return v;
}

CvGrid CvGrid::standard(KernelKind kind) {
  CvGrid g;
  g.phi = linspace(2.12, 26.52, 25);
  g.alpha = linspace(0.8, 0.99, 25);
  g.kind = kind;
  return g;
}

void CvGrid::validate() const {
  if (phi.empty() || alpha.empty()) throw ParameterError("grid axes must be non-empty");
  if (folds < 2) throw ParameterError("cross-validation needs at least 2 folds (K >= 2)");
  if (refine_rounds < 0) throw ParameterError("refine rounds must be non-negative");
  for (std::size_t i = 0; i < phi.size(); ++i) {
    CorrelationModel::exponential(phi[i]).validate();
    if (i && !(phi[i] > phi[i - 1])) throw ParameterError("phi grid must be strictly ascending");
  }
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    check_kind_alpha(alpha[i], kind);
    if (i && !(alpha[i] > alpha[i - 1])) throw ParameterError("alpha grid must be strictly ascending");
  }
}

namespace {

CvRound run_round(const std::vector<FoldPlan>& plans, const std::vector<double>& phis,
                  const std::vector<double>& alphas, KernelKind kind, const CvOptions& opts,
                  const PriorSpec& prior, std::vector<Vector>& fold_scores) {
  CvRound r;
  r.phi = phis;
  r.alpha = alphas;
  const std::size_t np = phis.size();
  const std::size_t na = alphas.size();
  std::vector<std::vector<CellOutcome>> rows(np);
  parallel_for(0, np, [&](std::size_t i) { rows[i] = score_row(plans, phis[i], alphas, kind, opts, prior); });
  r.scores.resize(static_cast<Index>(np), static_cast<Index>(na));
  r.errors.resize(np * na);
  fold_scores.assign(np * na, Vector());
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < np; ++i) {
    for (std::size_t j = 0; j < na; ++j) {
      const CellOutcome& c = rows[i][j];
      r.scores(static_cast<Index>(i), static_cast<Index>(j)) = c.score;
      r.errors[i * na + j] = c.error;
      fold_scores[i * na + j] = c.folds;
      if (c.error.empty() && c.score < best) {
        best = c.score;
        r.best_phi = static_cast<Index>(i);
        r.best_alpha = static_cast<Index>(j);
      }
    }
  }
  if (r.best_phi < 0) {
    throw DataError("every grid cell failed; first error: " + r.errors.front());
  }
  return r;
}

// Half-span window around `centre`, clipped to the admissible range.
std::vector<double> refine_axis(const std::vector<double>& axis, double centre, double lo_limit,
                                double hi_limit) {
  const double half = 0.25 * (axis.back() - axis.front());
  double lo = std::max(centre - half, lo_limit);
  double hi = std::min(centre + half, hi_limit);
  if (axis.size() == 1 || !(hi > lo)) return {centre};
  return linspace(lo, hi, static_cast<Index>(axis.size()));
}

}  // namespace

CvResult grid_search(const Dataset& data, const CvGrid& grid, const CvOptions& opts) {
  data.validate();
  grid.validate();
  const auto folds = make_folds(data.size(), grid.folds, grid.seed);
  const auto plans = plan_folds(data, folds, opts);
  const PriorSpec prior = cv_prior(data);

  CvResult result;
  std::vector<double> phis = grid.phi;
  std::vector<double> alphas = grid.alpha;
  std::vector<Vector> fold_scores;
  for (Index round = 0; round <= grid.refine_rounds; ++round) {
    result.rounds.push_back(run_round(plans, phis, alphas, grid.kind, opts, prior, fold_scores));
    const CvRound& r = result.rounds.back();
    result.phi = r.phi[static_cast<std::size_t>(r.best_phi)];
    result.alpha = r.alpha[static_cast<std::size_t>(r.best_alpha)];
    result.score = r.scores(r.best_phi, r.best_alpha);
    result.fold_rmspe = fold_scores[static_cast<std::size_t>(r.best_phi) * r.alpha.size() +
                                    static_cast<std::size_t>(r.best_alpha)];
    const double alpha_max = grid.kind == KernelKind::Latent ? std::nextafter(1.0, 0.0) : 1.0;
    phis = refine_axis(r.phi, result.phi, 0.5 * r.phi.front(), std::numeric_limits<double>::max());
    alphas = refine_axis(r.alpha, result.alpha, 0.5 * r.alpha.front(), alpha_max);
  }
  return result;
}

void write_scores_csv(const std::string& path, const CvRound& round) {
  CsvTable t;
  t.header.push_back("phi");
  for (double a : round.alpha) t.header.push_back(format_number(a));
  t.values.resize(static_cast<Index>(round.phi.size()), static_cast<Index>(round.alpha.size()) + 1);
  for (std::size_t i = 0; i < round.phi.size(); ++i) {
    t.values(static_cast<Index>(i), 0) = round.phi[i];
    t.values.row(static_cast<Index>(i)).tail(static_cast<Index>(round.alpha.size())) =
        round.scores.row(static_cast<Index>(i));
  }
  write_csv(path, t);
}

}  // namespace cnngp
