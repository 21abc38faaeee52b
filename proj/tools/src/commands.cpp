#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "cnngp/crossval.hpp"
#include "cnngp/dataset.hpp"
#include "cnngp/error.hpp"
#include "cnngp/kl.hpp"
#include "cnngp/metrics.hpp"
#include "cnngp/model.hpp"
#include "cnngp/random.hpp"
#include "cnngp/sim.hpp"
#include "cnngp/spatial.hpp"
#include "cnngp/summary.hpp"
#include "cnngp_cli/cli.hpp"
#include "json_io.hpp"

#ifndef CNNGP_VERSION
#define CNNGP_VERSION "unknown"
#endif

namespace fs = std::filesystem;

namespace cnngp::cli {

namespace {

bool admissible(double r12, double r13, double r23) {
  return 1.0 - r12 * r12 > 0.0 &&
         1.0 - (r12 * r12 + r13 * r13 + r23 * r23) + 2.0 * r12 * r13 * r23 > 0.0;
}

std::string join(const std::string& dir, const std::string& name) {
  return (fs::path(dir) / name).string();
}

void ensure_dir(const std::string& dir) {
  if (dir.empty()) throw ParameterError("an output directory is required (--out)");
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw DataError("cannot create directory '" + dir + "': " + ec.message());
}

Json software() { return Json{{"name", "cnngp"}, {"version", CNNGP_VERSION}}; }

std::string kind_name(KernelKind k) { return to_string(k); }

KernelKind kind_from(const std::string& s) {
  if (s == "response") return KernelKind::Response;
  if (s == "latent") return KernelKind::Latent;
  throw ParameterError("unknown model kind '" + s + "' (expected response or latent)");
}

OrderingStrategy ordering_from(const std::string& s) {
  auto o = parse_ordering(s);
  if (!o) throw ParameterError("unknown ordering '" + s + "'");
  return *o;
}

// Appends columns to a table being assembled.
struct TableBuilder {
  Index rows;
  std::vector<std::string> header;
  std::vector<Vector> cols;

  void add(const std::string& name, const Vector& v) {
    header.push_back(name);
    cols.push_back(v);
  }
  void add_block(const std::string& prefix, const Matrix& m) {
    for (Index j = 0; j < m.cols(); ++j) add(prefix + "_" + std::to_string(j + 1), m.col(j));
  }
  CsvTable table() const {
    CsvTable t;
    t.header = header;
    t.values.resize(rows, static_cast<Index>(cols.size()));
    for (std::size_t c = 0; c < cols.size(); ++c) t.values.col(static_cast<Index>(c)) = cols[c];
    return t;
  }
};

Matrix columns_with_prefix(const CsvTable& t, const std::string& prefix, bool required,
                           const std::string& path) {
  std::vector<Index> idx;
  for (Index k = 1;; ++k) {
    const Index c = t.column(prefix + "_" + std::to_string(k));
    if (c < 0) break;
    idx.push_back(c);
  }
  if (idx.empty() && required) {
    throw DataError("'" + path + "' has no " + prefix + "_1 column");
  }
  Matrix m(t.values.rows(), static_cast<Index>(idx.size()));
  for (std::size_t k = 0; k < idx.size(); ++k) m.col(static_cast<Index>(k)) = t.values.col(idx[k]);
  return m;
}

// Rows flagged holdout=1 when the column exists, otherwise all rows.
std::vector<Index> selected_rows(const CsvTable& t) {
  const Index h = t.column("holdout");
  std::vector<Index> rows;
  for (Index i = 0; i < t.values.rows(); ++i) {
    if (h < 0 || t.values(i, h) == 1.0) rows.push_back(i);
  }
  return rows;
}

Matrix take_rows(const Matrix& m, const std::vector<Index>& rows) {
  Matrix out(static_cast<Index>(rows.size()), m.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) out.row(static_cast<Index>(i)) = m.row(rows[i]);
  return out;
}

using CoordKey = std::vector<double>;

std::map<CoordKey, Index> index_by_coords(const Matrix& coords) {
  std::map<CoordKey, Index> m;
  for (Index i = 0; i < coords.rows(); ++i) {
    CoordKey k(coords.cols());
    for (Index j = 0; j < coords.cols(); ++j) k[static_cast<std::size_t>(j)] = coords(i, j);
    m.emplace(std::move(k), i);
  }
  return m;
}

// For each row of `coords`, the matching row in `lookup`.
std::vector<Index> match_coords(const Matrix& coords, const std::map<CoordKey, Index>& lookup,
                                const std::string& what) {
  std::vector<Index> rows;
  for (Index i = 0; i < coords.rows(); ++i) {
    CoordKey k(coords.cols());
    for (Index j = 0; j < coords.cols(); ++j) k[static_cast<std::size_t>(j)] = coords(i, j);
    auto it = lookup.find(k);
    if (it == lookup.end()) {
      throw DataError(what + ": no row with the coordinates of row " + std::to_string(i + 1));
    }
    rows.push_back(it->second);
  }
  return rows;
}

// Empirical covariance (n - 1 denominator) of the rows of each draw.
std::vector<Matrix> row_covariances(const std::vector<Matrix>& draws) {
  std::vector<Matrix> out;
  out.reserve(draws.size());
  for (const auto& d : draws) {
    const Matrix c = d.rowwise() - d.colwise().mean();
    out.push_back(c.transpose() * c / static_cast<double>(std::max<Index>(d.rows() - 1, 1)));
  }
  return out;
}

CsvTable draws_table(const std::vector<Matrix>& draws, const std::string& prefix) {
  const Index rows = draws.empty() ? 0 : draws.front().rows();
  const Index cols = draws.empty() ? 0 : draws.front().cols();
  CsvTable t;
  t.header.push_back("draw");
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) {
      t.header.push_back(prefix + "_" + std::to_string(i + 1) + "_" + std::to_string(j + 1));
    }
  }
  t.values.resize(static_cast<Index>(draws.size()), 1 + rows * cols);
  for (std::size_t k = 0; k < draws.size(); ++k) {
    const auto r = static_cast<Index>(k);
    t.values(r, 0) = static_cast<double>(k + 1);
    for (Index i = 0; i < rows; ++i) {
      for (Index j = 0; j < cols; ++j) t.values(r, 1 + i * cols + j) = draws[k](i, j);
    }
  }
  return t;
}

// A run directory re-opened: the fitted model plus its recorded settings.
struct LoadedRun {
  Json run;
  Dataset train;
  ModelConfig config;
  Index draws = 0;
  std::uint64_t seed = 0;
};

ModelConfig model_config(const FitOptions& o, double phi, double alpha, Index q, Index p) {
  ModelConfig c;
  c.kind = o.kind;
  c.phi = phi;
  c.alpha = alpha;
  c.neighbors = o.neighbors;
  c.ordering = o.ordering;
  c.lsmr.atol = o.lsmr_atol;
  c.lsmr.btol = o.lsmr_btol;
  c.lsmr.max_iterations = o.lsmr_max_iterations;
  PriorSpec prior = PriorSpec::flat(q);
  if (o.prior == "proper") {
    if (!(o.prior_variance > 0.0)) throw ParameterError("--prior-variance must be positive");
    prior = PriorSpec::proper(Matrix::Zero(p, q), o.prior_variance * Matrix::Identity(p, p),
                              Matrix::Identity(q, q), static_cast<double>(q) + 1.0);
  } else if (o.prior != "flat") {
    throw ParameterError("--prior must be flat or proper");
  }
  if (o.nu) prior.nu = *o.nu;
  c.prior = prior;
  return c;
}

Json run_record(const FitOptions& o, const ModelConfig& c, const std::string& data_path,
                const std::string& hyper_source) {
  Json j;
  j["software"] = software();
  j["command"] = "fit";
  j["data"] = data_path;
  j["kind"] = kind_name(c.kind);
  j["phi"] = c.phi;
  j["alpha"] = c.alpha;
  j["hyper_source"] = hyper_source;
  j["neighbors"] = c.neighbors;
  j["ordering"] = to_string(c.ordering);
  j["prior"] = Json{{"mode", o.prior}, {"variance", o.prior_variance}, {"nu", c.prior->nu}};
  j["draws"] = o.draws;
  j["seed"] = o.seed;
  j["lsmr"] = Json{{"atol", c.lsmr.atol}, {"btol", c.lsmr.btol},
                   {"max_iterations", c.lsmr.max_iterations}};
  return j;
}

FitOptions fit_options_from_run(const Json& run) {
  FitOptions o;
  o.data = run.at("data").get<std::string>();
  o.kind = kind_from(run.at("kind").get<std::string>());
  o.phi = run.at("phi").get<double>();
  o.alpha = run.at("alpha").get<double>();
  o.neighbors = run.at("neighbors").get<Index>();
  o.ordering = ordering_from(run.at("ordering").get<std::string>());
  o.prior = run.at("prior").at("mode").get<std::string>();
  o.prior_variance = run.at("prior").at("variance").get<double>();
  o.nu = run.at("prior").at("nu").get<double>();
  o.draws = run.at("draws").get<Index>();
  o.seed = run.at("seed").get<std::uint64_t>();
  o.lsmr_atol = run.at("lsmr").at("atol").get<double>();
  o.lsmr_btol = run.at("lsmr").at("btol").get<double>();
  o.lsmr_max_iterations = run.at("lsmr").at("max_iterations").get<Index>();
  return o;
}

LoadedRun load_run(const std::string& dir) {
  LoadedRun r;
  try {
    r.run = read_json(join(dir, "run.json"));
    const FitOptions o = fit_options_from_run(r.run);
    r.train = read_dataset(o.data).training();
    r.config = model_config(o, *o.phi, *o.alpha, r.train.responses(), r.train.covariates());
    r.draws = o.draws;
    r.seed = o.seed;
  } catch (const nlohmann::json::exception& e) {
    throw DataError("run directory '" + dir + "' has an invalid run.json: " + e.what());
  }
  return r;
}

struct Queries {
  Matrix coords;
  Matrix x;
};

Queries read_queries(const std::string& path, Index p) {
  const CsvTable t = read_csv(path);
  const auto rows = selected_rows(t);
  Queries q;
  q.coords = take_rows(columns_with_prefix(t, "coord", true, path), rows);
  q.x = take_rows(columns_with_prefix(t, "x", p > 0, path), rows);
  if (q.coords.rows() == 0) throw DataError("'" + path + "' has no prediction sites");
  if (q.x.cols() != p) {
    throw DimensionError("'" + path + "' has " + std::to_string(q.x.cols()) +
                         " covariate columns, the model has " + std::to_string(p));
  }
  if (!q.x.allFinite()) throw DataError("'" + path + "' has non-finite covariates");
  return q;
}

}  // namespace

std::string cmd_simulate(const SimulateOptions& o) {
  SimConfig c = SimConfig::table1();
  c.n = o.n;
  c.holdout = o.holdout ? *o.holdout : (o.n + 3) / 6;
  c.phi = o.phi;
  c.alpha = o.alpha;
  c.seed = o.seed;
  ensure_dir(o.out_dir);
  const SimOutput sim = generate(c);
  write_dataset(join(o.out_dir, "data.csv"), sim.data);

  TableBuilder t{sim.data.size(), {}, {}};
  t.add_block("coord", sim.data.coords);
  t.add_block("omega", sim.omega);
  t.add_block("centered", center_by_intercept(sim.omega, c.beta));
  Vector flags(sim.data.size());
  for (Index i = 0; i < sim.data.size(); ++i) flags[i] = sim.data.holdout[static_cast<std::size_t>(i)] ? 1.0 : 0.0;
  t.add("holdout", flags);
  write_csv(join(o.out_dir, "truth.csv"), t.table());

  Json truth;
  truth["software"] = software();
  truth["n"] = c.n;
  truth["holdout"] = c.holdout;
  truth["beta"] = to_json(c.beta);
  truth["sigma"] = to_json(c.sigma);
  truth["phi"] = c.phi;
  truth["alpha"] = c.alpha;
  truth["seed"] = c.seed;
  truth["noise_cov"] = to_json(sim.noise_cov);
  truth["omega_cov"] = to_json(sim.omega_cov);
  write_json(join(o.out_dir, "truth.json"), truth);

  Json summary{{"data", join(o.out_dir, "data.csv")},
               {"truth", join(o.out_dir, "truth.csv")},
               {"n", c.n},
               {"holdout", c.holdout}};
  return summary.dump();
}

std::string cmd_cv(const CvOptionsCli& o) {
  ensure_dir(o.out_dir);
  const Dataset data = read_dataset(o.data).training();
  CvGrid grid;
  grid.phi = linspace(o.phi_min, o.phi_max, o.phi_count);
  grid.alpha = linspace(o.alpha_min, o.alpha_max, o.alpha_count);
  grid.folds = o.folds;
  grid.seed = o.seed;
  grid.kind = o.kind;
  grid.refine_rounds = o.refine;
  CvOptions opts;
  opts.neighbors = o.neighbors;
  opts.ordering = o.ordering;
  const CvResult res = grid_search(data, grid, opts);

  write_scores_csv(join(o.out_dir, "cv_scores.csv"), res.last());
  Json rounds = Json::array();
  for (std::size_t r = 0; r < res.rounds.size(); ++r) {
    const CvRound& round = res.rounds[r];
    if (res.rounds.size() > 1) {
      write_scores_csv(join(o.out_dir, "cv_scores_round_" + std::to_string(r + 1) + ".csv"), round);
    }
    Index failed = 0;
    for (const auto& e : round.errors) failed += e.empty() ? 0 : 1;
    Json jr{{"phi", round.phi},
            {"alpha", round.alpha},
            {"selected_phi", round.phi[static_cast<std::size_t>(round.best_phi)]},
            {"selected_alpha", round.alpha[static_cast<std::size_t>(round.best_alpha)]},
            {"failed_cells", failed}};
    if (failed) {
      const auto it = std::find_if(round.errors.begin(), round.errors.end(), [](const std::string& e) { return !e.empty(); });
      jr["first_error"] = *it;
    }
    rounds.push_back(std::move(jr));
  }
  Json j;
  j["software"] = software();
  j["command"] = "cv";
  j["data"] = fs::absolute(o.data).string();
  j["kind"] = kind_name(o.kind);
  j["phi"] = res.phi;
  j["alpha"] = res.alpha;
  j["score"] = res.score;
  j["fold_rmspe"] = to_json(res.fold_rmspe);
  j["folds"] = o.folds;
  j["neighbors"] = o.neighbors;
  j["seed"] = o.seed;
  j["rounds"] = rounds;
  write_json(join(o.out_dir, "cv.json"), j);
  return Json{{"phi", res.phi}, {"alpha", res.alpha}, {"score", res.score}}.dump();
}

std::string cmd_fit(const FitOptions& o) {
  ensure_dir(o.out_dir);
  if (o.draws < 0) throw ParameterError("--draws must be non-negative");
  double phi = 0.0;
  double alpha = 0.0;
  std::string source = "flags";
  if (!o.cv_result.empty()) {
    const Json cv = read_json(o.cv_result);
    phi = cv.at("phi").get<double>();
    alpha = cv.at("alpha").get<double>();
    source = fs::absolute(o.cv_result).string();
  }
  if (o.phi) phi = *o.phi;
  if (o.alpha) alpha = *o.alpha;
  if (!o.phi && o.cv_result.empty()) throw ParameterError("--phi (or --cv-result) is required");
  if (!o.alpha && o.cv_result.empty()) throw ParameterError("--alpha (or --cv-result) is required");

  const std::string data_path = fs::absolute(o.data).string();
  const Dataset train = read_dataset(data_path).training();
  const ModelConfig config = model_config(o, phi, alpha, train.responses(), train.covariates());
  const SpatialModel model = SpatialModel::fit(train, config);
  write_json(join(o.out_dir, "run.json"), run_record(o, config, data_path, source));

  Json post;
  post["software"] = software();
  post["kind"] = kind_name(config.kind);
  post["n"] = train.size();
  post["p"] = train.covariates();
  post["q"] = train.responses();
  post["phi"] = phi;
  post["alpha"] = alpha;
  post["beta_mean"] = to_json(model.beta_mean());
  post["psi_star"] = to_json(model.posterior_scale());
  post["nu_star"] = model.posterior_dof();
  if (model.posterior_dof() > static_cast<double>(train.responses()) + 1.0) {
    post["sigma_mean"] = to_json(model.sigma_mean());
  }
  if (config.kind == KernelKind::Response) {
    post["v_star"] = to_json(model.response_posterior().v());
  } else {
    Json reports = Json::array();
    for (const auto& r : model.latent_posterior().reports) {
      reports.push_back(Json{{"stop", to_string(r.stop)}, {"iterations", r.iterations}, {"norm_r", r.norm_r}});
    }
    post["lsmr"] = reports;
  }

  if (o.draws > 0) {
    const SampleSet s = model.sample(o.draws, o.seed);
    post["draws"] = s.size();
    post["excluded_draws"] = s.excluded;
    if (s.size() == 0) throw ConvergenceError("every posterior draw was excluded");
    post["beta"] = to_json(summarize_draws(s.beta));
    post["sigma"] = to_json(summarize_draws(s.sigma));
    write_csv(join(o.out_dir, "beta_samples.csv"), draws_table(s.beta, "beta"));
    write_csv(join(o.out_dir, "sigma_samples.csv"), draws_table(s.sigma, "sigma"));
    if (config.kind == KernelKind::Latent) {
      post["omega_cov"] = to_json(summarize_draws(row_covariances(s.omega)));
      const DrawSummary om = summarize_draws(s.omega);
      const DrawSummary cen = summarize_draws(intercept_centered(s.omega, s.beta));
      TableBuilder t{train.size(), {}, {}};
      t.add_block("coord", train.coords);
      t.add_block("omega_mean", model.to_input_order(om.mean));
      t.add_block("omega_sd", model.to_input_order(om.sd));
      t.add_block("omega_lower", model.to_input_order(om.lower));
      t.add_block("omega_upper", model.to_input_order(om.upper));
      t.add_block("centered_mean", model.to_input_order(cen.mean));
      t.add_block("centered_lower", model.to_input_order(cen.lower));
      t.add_block("centered_upper", model.to_input_order(cen.upper));
      write_csv(join(o.out_dir, "latent_summary.csv"), t.table());
    }
  } else {
    post["draws"] = 0;
  }
  write_json(join(o.out_dir, "posterior.json"), post);
  Json summary{{"run", o.out_dir}, {"kind", kind_name(config.kind)}, {"phi", phi},
               {"alpha", alpha}, {"beta_mean", to_json(model.beta_mean())}};
  return summary.dump();
}

std::string cmd_predict(const PredictOptions& o) {
  if (o.out.empty()) throw ParameterError("an output file is required (--out)");
  const LoadedRun run = load_run(o.run_dir);
  if (run.draws < 1) throw ParameterError("the run has no posterior draws; refit with --draws > 0");
  const Queries q = read_queries(o.queries, run.train.covariates());
  const SpatialModel model = SpatialModel::fit(run.train, run.config);
  SampleSet s = model.sample(run.draws, run.seed);
  if (s.size() == 0) throw ConvergenceError("every posterior draw was excluded");
  model.predict(s, q.coords, q.x, o.seed);
  const DrawSummary y = summarize_draws(s.y_pred);
  TableBuilder t{q.coords.rows(), {}, {}};
  t.add_block("coord", q.coords);
  t.add_block("mean", y.mean);
  t.add_block("sd", y.sd);
  t.add_block("lower", y.lower);
  t.add_block("upper", y.upper);
  if (model.kind() == KernelKind::Latent) {
    const DrawSummary w = summarize_draws(s.omega_pred);
    t.add_block("omega_mean", w.mean);
    t.add_block("omega_sd", w.sd);
    t.add_block("omega_lower", w.lower);
    t.add_block("omega_upper", w.upper);
  }
  write_csv(o.out, t.table());
  return Json{{"predictions", o.out}, {"sites", q.coords.rows()}, {"draws", s.size()}}.dump();
}

std::string cmd_metrics(const MetricsOptions& o) {
  const CsvTable pred = read_csv(o.predictions);
  const Matrix pc = columns_with_prefix(pred, "coord", true, o.predictions);
  const Matrix mean = columns_with_prefix(pred, "mean", true, o.predictions);
  const CsvTable truth_table = read_csv(o.truth);
  const Matrix tc = columns_with_prefix(truth_table, "coord", true, o.truth);
  const Matrix ty = columns_with_prefix(truth_table, "y", true, o.truth);
  const Matrix truth = take_rows(ty, match_coords(pc, index_by_coords(tc), o.truth));

  MetricsReport r;
  r.sites = truth.rows();
  r.responses = truth.cols();
  r.rmspe = rmspe(truth, mean);
  const Matrix lower = columns_with_prefix(pred, "lower", false, o.predictions);
  const Matrix upper = columns_with_prefix(pred, "upper", false, o.predictions);
  if (lower.cols() == mean.cols() && upper.cols() == mean.cols()) r.cvg = coverage(truth, lower, upper);
  const Matrix sd = columns_with_prefix(pred, "sd", false, o.predictions);
  if (sd.cols() == mean.cols()) r.mcrps = mcrps(truth, mean, sd);

  if (!o.latent_summary.empty() != !o.latent_truth.empty()) {
    throw ParameterError("--latent-summary and --latent-truth must be given together");
  }
  if (!o.latent_summary.empty()) {
    const CsvTable ls = read_csv(o.latent_summary);
    const CsvTable lt = read_csv(o.latent_truth);
    const Matrix lc = columns_with_prefix(ls, "coord", true, o.latent_summary);
    const auto rows = match_coords(lc, index_by_coords(columns_with_prefix(lt, "coord", true, o.latent_truth)),
                                   o.latent_truth);
    const Matrix centered_truth = take_rows(columns_with_prefix(lt, "centered", true, o.latent_truth), rows);
    r.msel = msel(centered_truth, columns_with_prefix(ls, "centered_mean", true, o.latent_summary));
    r.cvgl = coverage(centered_truth, columns_with_prefix(ls, "centered_lower", true, o.latent_summary),
                      columns_with_prefix(ls, "centered_upper", true, o.latent_summary));
  }
  const Json j = to_json(r);
  if (!o.out.empty()) write_json(o.out, j);
  return j.dump();
}

std::string cmd_kl_demo(const KlDemoOptions& o) {
  Json j;
  j["software"] = software();
  if (o.random == 0) {
    double rho13 = o.rho13.value_or(o.rho12 * o.rho23);
    if (o.identity == "response") {
      rho13 = o.rho12 * o.rho23 / (1.0 + o.delta2);
    } else if (o.identity == "latent") {
      rho13 = o.rho12 * o.rho23;
    } else if (!o.identity.empty()) {
      throw ParameterError("--identity must be response or latent");
    }
    const ToyCovarianceTriple t = toy_covariances(o.rho12, rho13, o.rho23, o.sigma2, o.delta2);
    j["rho12"] = o.rho12;
    j["rho13"] = rho13;
    j["rho23"] = o.rho23;
    j["sigma2"] = o.sigma2;
    j["delta2"] = o.delta2;
    j["kl_response"] = kl_gaussian_zero_mean(t.truth, t.response);
    j["kl_latent"] = kl_gaussian_zero_mean(t.truth, t.latent);
    j["sigma_true"] = to_json(t.truth);
    j["sigma_response"] = to_json(t.response);
    j["sigma_latent"] = to_json(t.latent);
  } else {
    if (o.random < 0) throw ParameterError("--random must be non-negative");
    RandomStream rng(o.seed);
    Index kl_pass = 0;
    double kl_worst = 0.0;
    for (Index k = 0; k < o.random; ++k) {
      double r12 = 0.0, r23 = 0.0, d2 = 0.0;
      // Redraw until the response-side triple is a valid correlation matrix.
      do {
        r12 = 0.05 + 0.9 * rng.uniform();
        r23 = 0.05 + 0.9 * rng.uniform();
        d2 = 0.01 + 2.0 * rng.uniform();
      } while (!admissible(r12, r12 * r23 / (1.0 + d2), r23));
      const auto tr = toy_covariances(r12, r12 * r23 / (1.0 + d2), r23, 1.0, d2);
      const auto tl = toy_covariances(r12, r12 * r23, r23, 1.0, d2);
      const double a = kl_gaussian_zero_mean(tr.truth, tr.response);
      const double b = kl_gaussian_zero_mean(tl.truth, tl.latent);
      kl_worst = std::max({kl_worst, a, b});
      kl_pass += (a <= 1e-12 && b <= 1e-12) ? 1 : 0;
    }
    const double taus[] = {0.01, 0.1, 1.0};
    Index shrink_pass = 0;
    Index equal_pass = 0;
    for (Index k = 0; k < o.random; ++k) {
      Matrix pts(30, 2);
      for (Index i = 0; i < 30; ++i) {
        pts(i, 0) = rng.uniform();
        pts(i, 1) = rng.uniform();
      }
      const double phi = 1.0 + 19.0 * rng.uniform();
      const LocationSet locs = LocationSet::create(pts, OrderingStrategy::Sum);
      const Matrix c = corr_matrix(CorrelationModel::exponential(phi), locs.coords());
      const NeighborGraph g = build_training_neighbors(locs, 3);
      bool all = true;
      for (double tau2 : taus) all = all && frobenius_shrink_check(c, tau2, g).pass;
      shrink_pass += all ? 1 : 0;
      equal_pass += frobenius_shrink_check(c, 0.0, g).pass ? 1 : 0;
    }
    j["instances"] = o.random;
    j["kl_identity_passes"] = kl_pass;
    j["kl_identity_worst"] = kl_worst;
    j["shrink_passes"] = shrink_pass;
    j["shrink_equality_at_zero_passes"] = equal_pass;
  }
  if (!o.out.empty()) write_json(o.out, j);
  return j.dump();
}

std::string cmd_raster(const RasterOptions& o) {
  if (o.nx < 1 || o.ny < 1) throw ParameterError("raster resolution must be at least 1 x 1");
  if (!(o.xmax >= o.xmin) || !(o.ymax >= o.ymin)) throw ParameterError("raster bounds are inverted");
  if (o.out.empty()) throw ParameterError("an output file is required (--out)");
  const LoadedRun run = load_run(o.run_dir);
  if (run.train.dim() != 2) throw DataError("raster export needs two-dimensional coordinates");
  const SpatialModel model = SpatialModel::fit(run.train, run.config);
  const std::vector<double> xs = linspace(o.xmin, o.xmax, o.nx);
  const std::vector<double> ys = linspace(o.ymin, o.ymax, o.ny);
  const Index cells = o.nx * o.ny;
  Matrix coords(cells, 2);
  Index k = 0;
  for (double y : ys) {
    for (double x : xs) {
      coords(k, 0) = x;
      coords(k, 1) = y;
      ++k;
    }
  }
  // Only the intercept is known away from the data; other covariates are set to 0.
  Matrix xu = Matrix::Zero(cells, run.train.covariates());
  if (xu.cols() > 0) xu.col(0).setOnes();
  TableBuilder t{cells, {}, {}};
  Vector site(cells);
  for (Index i = 0; i < cells; ++i) site[i] = static_cast<double>(i + 1);
  t.add("site", site);
  t.add_block("coord", coords);
  t.add_block("mean", model.predict_mean(coords, xu));
  if (model.kind() == KernelKind::Latent) {
    const PredictionWeights w = model.prediction_weights(coords);
    t.add_block("omega_mean", spmm(w.a, model.omega_mean()));
  }
  write_csv(o.out, t.table());
  return Json{{"raster", o.out}, {"cells", cells}}.dump();
}

}  // namespace cnngp::cli
