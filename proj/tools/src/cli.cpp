#include <exception>
#include <ostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cnngp/error.hpp"
#include "cnngp/parallel.hpp"
#include "cnngp_cli/cli.hpp"
#include "json_io.hpp"

namespace cnngp::cli {

namespace {

void print_error(std::ostream& err, const std::string& kind, const std::string& message) {
  err << Json{{"error", {{"kind", kind}, {"message", message}}}}.dump() << '\n';
}

const std::map<std::string, KernelKind> kKinds{{"response", KernelKind::Response},
                                               {"latent", KernelKind::Latent}};
const std::map<std::string, OrderingStrategy> kOrderings{
    {"sum", OrderingStrategy::Sum}, {"x", OrderingStrategy::X}, {"y", OrderingStrategy::Y}};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Conjugate nearest-neighbor Gaussian process models"};
  app.require_subcommand(1);
  Index threads = 0;
  app.add_option("--threads", threads, "Worker threads (0 = CNNGP_NUM_THREADS or all cores)")
      ->check(CLI::NonNegativeNumber);

  SimulateOptions sim;
  auto* s = app.add_subcommand("simulate", "Generate a synthetic dataset with known truth");
  s->add_option("--n", sim.n, "Number of sites")->check(CLI::PositiveNumber);
  s->add_option("--holdout", sim.holdout, "Sites flagged for holdout");
  s->add_option("--phi", sim.phi, "Exponential decay");
  s->add_option("--alpha", sim.alpha, "Spatial share of variance, in (0, 1)");
  s->add_option("--seed", sim.seed);
  s->add_option("--out", sim.out_dir, "Output directory")->required();

  CvOptionsCli cv;
  auto* c = app.add_subcommand("cv", "K-fold cross-validation over a (phi, alpha) grid");
  c->add_option("--data", cv.data, "Dataset CSV (holdout rows are ignored)")->required();
  c->add_option("--kind", cv.kind)->transform(CLI::CheckedTransformer(kKinds));
  c->add_option("--phi-min", cv.phi_min);
  c->add_option("--phi-max", cv.phi_max);
  c->add_option("--phi-count", cv.phi_count);
  c->add_option("--alpha-min", cv.alpha_min);
  c->add_option("--alpha-max", cv.alpha_max);
  c->add_option("--alpha-count", cv.alpha_count);
  c->add_option("--folds", cv.folds, "K (at least 2)");
  c->add_option("--neighbors,-m", cv.neighbors);
  c->add_option("--refine", cv.refine, "Extra half-span rounds around the selection");
  c->add_option("--seed", cv.seed);
  c->add_option("--ordering", cv.ordering)->transform(CLI::CheckedTransformer(kOrderings));
  c->add_option("--out", cv.out_dir, "Output directory")->required();

  FitOptions fit;
  auto* f = app.add_subcommand("fit", "Fit a model and draw from its posterior");
  f->add_option("--data", fit.data, "Dataset CSV (holdout rows are ignored)")->required();
  f->add_option("--kind", fit.kind)->transform(CLI::CheckedTransformer(kKinds));
  f->add_option("--phi", fit.phi);
  f->add_option("--alpha", fit.alpha);
  f->add_option("--cv-result", fit.cv_result, "cv.json supplying phi and alpha");
  f->add_option("--neighbors,-m", fit.neighbors);
  f->add_option("--draws", fit.draws, "Posterior draws (0 = closed-form summary only)");
  f->add_option("--seed", fit.seed);
  f->add_option("--ordering", fit.ordering)->transform(CLI::CheckedTransformer(kOrderings));
  f->add_option("--prior", fit.prior, "flat or proper (beta ~ N(0, v I))");
  f->add_option("--prior-variance", fit.prior_variance);
  f->add_option("--nu", fit.nu, "Prior degrees of freedom (default q + 1)");
  f->add_option("--lsmr-atol", fit.lsmr_atol);
  f->add_option("--lsmr-btol", fit.lsmr_btol);
  f->add_option("--lsmr-max-iterations", fit.lsmr_max_iterations);
  f->add_option("--out", fit.out_dir, "Run directory")->required();

  PredictOptions pred;
  auto* p = app.add_subcommand("predict", "Posterior predictive summaries at new sites");
  p->add_option("--run", pred.run_dir, "Run directory written by fit")->required();
  p->add_option("--queries", pred.queries,
                "CSV with coord_* and x_* columns; with a holdout column only flagged rows are used")
      ->required();
  p->add_option("--out", pred.out, "Predictions CSV")->required();
  p->add_option("--seed", pred.seed);

  MetricsOptions met;
  auto* m = app.add_subcommand("metrics", "Score predictions against truth");
  m->add_option("--predictions", met.predictions)->required();
  m->add_option("--truth", met.truth, "Dataset CSV holding the observed responses")->required();
  m->add_option("--latent-summary", met.latent_summary, "latent_summary.csv from a latent fit");
  m->add_option("--latent-truth", met.latent_truth, "truth.csv from simulate");
  m->add_option("--out", met.out, "Write the report JSON here as well");

  KlDemoOptions kl;
  auto* k = app.add_subcommand("kl-demo", "Three-site KL example and shrinkage checks");
  k->add_option("--rho12", kl.rho12);
  k->add_option("--rho13", kl.rho13);
  k->add_option("--rho23", kl.rho23);
  k->add_option("--sigma2", kl.sigma2);
  k->add_option("--delta2", kl.delta2);
  k->add_option("--identity", kl.identity, "response or latent: choose rho13 to zero that KL");
  k->add_option("--random", kl.random, "Run this many random instances instead");
  k->add_option("--seed", kl.seed);
  k->add_option("--out", kl.out);

  RasterOptions ras;
  auto* r = app.add_subcommand("raster", "Posterior mean surfaces on a regular grid");
  r->add_option("--run", ras.run_dir, "Run directory written by fit")->required();
  r->add_option("--xmin", ras.xmin);
  r->add_option("--xmax", ras.xmax);
  r->add_option("--ymin", ras.ymin);
  r->add_option("--ymax", ras.ymax);
  r->add_option("--nx", ras.nx);
  r->add_option("--ny", ras.ny);
  r->add_option("--out", ras.out, "Grid CSV")->required();

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    print_error(err, "usage_error", e.what());
    return 2;
  }

  try {
    if (threads > 0) set_num_threads(static_cast<std::size_t>(threads));
    std::string summary;
    if (s->parsed()) summary = cmd_simulate(sim);
    if (c->parsed()) summary = cmd_cv(cv);
    if (f->parsed()) summary = cmd_fit(fit);
    if (p->parsed()) summary = cmd_predict(pred);
    if (m->parsed()) summary = cmd_metrics(met);
    if (k->parsed()) summary = cmd_kl_demo(kl);
    if (r->parsed()) summary = cmd_raster(ras);
    out << summary << '\n';
    return 0;
  } catch (const Error& e) {
    print_error(err, e.kind(), e.what());
  } catch (const std::exception& e) {
    print_error(err, "internal_error", e.what());
  }
  return 1;
}

}  // namespace cnngp::cli
