#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cnngp/dataset.hpp"
#include "cnngp/sparse.hpp"
#include "cnngp/spatial.hpp"
#include "cnngp/vecchia.hpp"

namespace cnngp {

/// Fold label (0..k-1) per site: a random permutation dealt round-robin, so
/// fold sizes differ by at most one.
std::vector<Index> make_folds(Index n, Index k, std::uint64_t seed);

struct CvOptions {
  Index neighbors = 10;
  OrderingStrategy ordering = OrderingStrategy::Sum;
  /// Solver settings for latent-kind fits. Predictions only need posterior
  /// means, so the default is looser than for sampling.
  LsmrOptions lsmr{1e-8, 1e-8};
};

/// Sum over folds of the held-out RMSPE of posterior-mean predictions
/// (flat prior). Each fold re-orders its training sites and rebuilds the
/// neighbor graph.
double cv_score(const Dataset& data, double phi, double alpha, const std::vector<Index>& folds,
                KernelKind kind, const CvOptions& opts = {});
double cv_score(const Dataset& data, double phi, double alpha, Index k, KernelKind kind,
                std::uint64_t seed, const CvOptions& opts = {});

struct CvGrid {
  std::vector<double> phi;    ///< ascending, > 0
  std::vector<double> alpha;  ///< ascending, in (0, 1] (response) or (0, 1) (latent)
  Index folds = 5;
  std::uint64_t seed = 1;
  KernelKind kind = KernelKind::Response;
  /// Extra rounds, each re-centred on the previous selection with half the span.
  Index refine_rounds = 0;

  /// 25 x 25 over phi in [2.12, 26.52] and alpha in [0.8, 0.99], K = 5.
  static CvGrid standard(KernelKind kind);
  void validate() const;
};

/// `count` evenly spaced values from lo to hi inclusive (just lo when count = 1).
std::vector<double> linspace(double lo, double hi, Index count);

struct CvRound {
  std::vector<double> phi;
  std::vector<double> alpha;
  Matrix scores;  ///< |phi| x |alpha|; NaN where the cell failed
  std::vector<std::string> errors;  ///< row-major (phi-major); empty string when the cell succeeded
  Index best_phi = -1;
  Index best_alpha = -1;
};

struct CvResult {
  std::vector<CvRound> rounds;
  double phi = 0.0;
  double alpha = 0.0;
  double score = 0.0;
  Vector fold_rmspe;  ///< per-fold RMSPE at the selected cell

  const CvRound& last() const { return rounds.back(); }
};

/// Evaluates every cell; selects the minimum, ties going to the smallest phi
/// and then the smallest alpha. Failed cells are skipped; throws only when
/// every cell of a round fails.
CvResult grid_search(const Dataset& data, const CvGrid& grid, const CvOptions& opts = {});

/// Rows are phi values, columns alpha values; the header row lists the alphas.
void write_scores_csv(const std::string& path, const CvRound& round);

}  // namespace cnngp
