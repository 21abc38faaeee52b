#include "cnngp/model.hpp"

#include <string>

#include "cnngp/error.hpp"

namespace cnngp {

void ModelConfig::validate() const {
  CorrelationModel::exponential(phi).validate();
  check_alpha(alpha);
  if (kind == KernelKind::Latent && alpha >= 1.0) {
    throw ParameterError("the latent model needs alpha < 1; use the response model for alpha = 1");
  }
  if (neighbors < 1) throw ParameterError("neighbor count m must be at least 1");
  if (ordering == OrderingStrategy::Given) {
    throw ParameterError("model fitting supports the sum, x and y orderings");
  }
  lsmr.validate();
}

SpatialModel SpatialModel::fit(const Dataset& train, const ModelConfig& config) {
  config.validate();
  train.validate();
  SpatialModel m;
  m.config_ = config;
  m.prior_ = config.prior ? *config.prior : PriorSpec::flat(train.responses());
  m.locations_ = LocationSet::create(train.coords, config.ordering);
  m.x_ = m.locations_.to_model_order(train.x);
  m.y_ = m.locations_.to_model_order(train.y);
  m.graph_ = build_training_neighbors(m.locations_, config.neighbors);
  const auto corr = CorrelationModel::exponential(config.phi);
  m.factor_ = build_factor(m.graph_, m.locations_, corr, config.alpha, config.kind);
  if (config.kind == KernelKind::Response) {
    m.response_ = fit_response(m.x_, m.y_, m.factor_, m.prior_);
  } else {
    auto system = std::make_shared<const AugmentedSystem>(
        assemble_augmented(m.x_, m.y_, m.factor_, m.prior_, config.alpha));
    m.latent_ = fit_latent(std::move(system), m.prior_, config.lsmr);
  }
  return m;
}

const MNIWPosterior& SpatialModel::response_posterior() const {
  if (!response_) throw ParameterError("model was fitted with the latent kind");
  return *response_;
}

const LatentPosterior& SpatialModel::latent_posterior() const {
  if (!latent_) throw ParameterError("model was fitted with the response kind");
  return *latent_;
}

Matrix SpatialModel::beta_mean() const {
  return response_ ? response_->mu : latent_->beta();
}

Matrix SpatialModel::omega_mean() const { return latent_posterior().omega(); }

double SpatialModel::posterior_dof() const { return response_ ? response_->nu : latent_->nu; }

const Matrix& SpatialModel::posterior_scale() const {
  return response_ ? response_->psi : latent_->psi;
}

Matrix SpatialModel::sigma_mean() const {
  const double q = static_cast<double>(y_.cols());
  if (!(posterior_dof() > q + 1.0)) throw ParameterError("E[Sigma] needs nu* > q + 1");
  return posterior_scale() / (posterior_dof() - q - 1.0);
}

SampleSet SpatialModel::sample(Index draws, std::uint64_t seed) const {
  if (response_) return sample_response_posterior(*response_, draws, seed);
  return sample_latent_posterior(*latent_, draws, seed, config_.lsmr);
}

PredictionWeights SpatialModel::prediction_weights(const Matrix& query_coords) const {
  if (query_coords.rows() == 0) throw DataError("no prediction sites");
  if (query_coords.cols() != locations_.dim()) {
    throw DimensionError("prediction sites have " + std::to_string(query_coords.cols()) +
                         " coordinates, training sites have " + std::to_string(locations_.dim()));
  }
  if (!query_coords.allFinite()) throw DataError("prediction sites contain non-finite coordinates");
  const NeighborGraph g = build_prediction_neighbors(locations_, query_coords, config_.neighbors);
  return build_prediction_weights(g, locations_.coords(), query_coords,
                                  CorrelationModel::exponential(config_.phi), config_.alpha,
                                  config_.kind);
}

void SpatialModel::predict(SampleSet& samples, const Matrix& query_coords, const Matrix& query_x,
                           std::uint64_t seed) const {
  const PredictionWeights w = prediction_weights(query_coords);
  if (response_) {
    predict_response(samples, w, query_x, x_, y_, seed);
  } else {
    predict_latent(samples, w, query_x, config_.alpha, seed);
  }
}

Matrix SpatialModel::predict_mean(const Matrix& query_coords, const Matrix& query_x) const {
  const PredictionWeights w = prediction_weights(query_coords);
  if (response_) return predict_response_mean(response_->mu, w, query_x, x_, y_);
  return predict_latent_mean(latent_->beta(), latent_->omega(), w, query_x);
}

}  // namespace cnngp
