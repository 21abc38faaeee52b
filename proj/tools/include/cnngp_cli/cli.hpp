#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cnngp/crossval.hpp"
#include "cnngp/model.hpp"

namespace cnngp::cli {

/// Parses `args` (args[0] is the program name) and runs one subcommand.
/// Returns the process exit code; failures print a JSON object
/// {"error": {"kind": ..., "message": ...}} to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

struct SimulateOptions {
  Index n = 1200;
  /// Unset: n / 6 rounded, which gives the usual 200 of 1200.
  std::optional<Index> holdout;
  double phi = 6.0;
  double alpha = 0.9;
  std::uint64_t seed = 1;
  std::string out_dir;
};

struct CvOptionsCli {
  std::string data;
  KernelKind kind = KernelKind::Response;
  double phi_min = 2.12;
  double phi_max = 26.52;
  Index phi_count = 25;
  double alpha_min = 0.8;
  double alpha_max = 0.99;
  Index alpha_count = 25;
  Index folds = 5;
  Index neighbors = 10;
  Index refine = 0;
  std::uint64_t seed = 1;
  OrderingStrategy ordering = OrderingStrategy::Sum;
  std::string out_dir;
};

struct FitOptions {
  std::string data;
  KernelKind kind = KernelKind::Response;
  std::optional<double> phi;
  std::optional<double> alpha;
  std::string cv_result;  ///< cv.json supplying phi/alpha when not given
  Index neighbors = 10;
  Index draws = 500;
  std::uint64_t seed = 1;
  OrderingStrategy ordering = OrderingStrategy::Sum;
  std::string prior = "flat";
  double prior_variance = 100.0;
  std::optional<double> nu;
  double lsmr_atol = 1e-10;
  double lsmr_btol = 1e-10;
  Index lsmr_max_iterations = 0;
  std::string out_dir;
};

struct PredictOptions {
  std::string run_dir;
  std::string queries;
  std::string out;
  std::uint64_t seed = 2;
};

struct MetricsOptions {
  std::string predictions;
  std::string truth;
  std::string latent_summary;
  std::string latent_truth;
  std::string out;
};

struct KlDemoOptions {
  double rho12 = 0.6;
  std::optional<double> rho13;
  double rho23 = 0.5;
  double sigma2 = 1.0;
  double delta2 = 0.25;
  std::string identity;  ///< "", "response" or "latent": sets rho13 to the matching value
  Index random = 0;      ///< number of random instances for the identity and shrinkage checks
  std::uint64_t seed = 1;
  std::string out;
};

struct RasterOptions {
  std::string run_dir;
  double xmin = 0.0;
  double xmax = 1.0;
  double ymin = 0.0;
  double ymax = 1.0;
  Index nx = 100;
  Index ny = 100;
  std::string out;
};

// Each command writes its files and returns a short JSON summary string
// (also printed to stdout by `run`).
std::string cmd_simulate(const SimulateOptions& o);
std::string cmd_cv(const CvOptionsCli& o);
std::string cmd_fit(const FitOptions& o);
std::string cmd_predict(const PredictOptions& o);
std::string cmd_metrics(const MetricsOptions& o);
std::string cmd_kl_demo(const KlDemoOptions& o);
std::string cmd_raster(const RasterOptions& o);

}  // namespace cnngp::cli
