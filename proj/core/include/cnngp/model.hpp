#pragma once

#include <cstdint>
#include <memory>
#include <optional>

#include "cnngp/dataset.hpp"
#include "cnngp/latent_model.hpp"
#include "cnngp/response_model.hpp"
#include "cnngp/spatial.hpp"
#include "cnngp/summary.hpp"
#include "cnngp/vecchia.hpp"

namespace cnngp {

struct ModelConfig {
  KernelKind kind = KernelKind::Response;
  double phi = 6.0;
  double alpha = 0.9;
  Index neighbors = 10;
  OrderingStrategy ordering = OrderingStrategy::Sum;
  /// Empty means the flat default for the data's q.
  std::optional<PriorSpec> prior;
  LsmrOptions lsmr;

  void validate() const;
};

/// A fitted response or latent model on one training set. Holds the ordered
/// data, neighbor graph, factor and closed-form posterior.
///
/// Matrices returned by the accessors below are in model order unless the
/// name says otherwise; `to_input_order` maps site rows back.
class SpatialModel {
 public:
  static SpatialModel fit(const Dataset& train, const ModelConfig& config);

  const ModelConfig& config() const { return config_; }
  KernelKind kind() const { return config_.kind; }
  const PriorSpec& prior() const { return prior_; }
  const LocationSet& locations() const { return locations_; }
  const Matrix& x() const { return x_; }
  const Matrix& y() const { return y_; }
  const NeighborGraph& graph() const { return graph_; }
  const VecchiaFactor& factor() const { return factor_; }

  /// Only one of these is populated, per kind().
  const MNIWPosterior& response_posterior() const;
  const LatentPosterior& latent_posterior() const;

  /// Posterior mean of beta (p x q) and, for the latent kind, of omega.
  Matrix beta_mean() const;
  Matrix omega_mean() const;
  /// E[Sigma | Y] when nu* > q + 1.
  Matrix sigma_mean() const;
  double posterior_dof() const;
  const Matrix& posterior_scale() const;

  Matrix to_input_order(const Matrix& model_rows) const { return locations_.to_input_order(model_rows); }

  SampleSet sample(Index draws, std::uint64_t seed) const;

  PredictionWeights prediction_weights(const Matrix& query_coords) const;
  /// Adds y_pred (and omega_pred for the latent kind) to `samples`; query rows
  /// keep the caller's order.
  void predict(SampleSet& samples, const Matrix& query_coords, const Matrix& query_x,
               std::uint64_t seed) const;
  /// Plug-in predictive mean at the posterior mean of beta (and omega).
  Matrix predict_mean(const Matrix& query_coords, const Matrix& query_x) const;

 private:
  ModelConfig config_;
  PriorSpec prior_;
  LocationSet locations_;
  Matrix x_;
  Matrix y_;
  NeighborGraph graph_;
  VecchiaFactor factor_;
  std::optional<MNIWPosterior> response_;
  std::optional<LatentPosterior> latent_;
};

}  // namespace cnngp
