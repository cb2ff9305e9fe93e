#include "boundary_rf/training.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "boundary_rf/flow.hpp"

namespace brf {

double TimeSampler::from_uniform(double u) const {
  require(u >= 0.0 && u < 1.0, "TimeSampler::from_uniform: u outside [0,1)");
  return kEdge + (1.0 - 2.0 * kEdge) * u;
}

double TimeSampler::from_normal(double z) const {
  const double x = logit_mean + logit_std * z;
  const double t = 1.0 / (1.0 + std::exp(-x));
  return std::clamp(t, kEdge, 1.0 - kEdge);
}

Vec TimeSampler::draw(Index n, RngStream& stream) const {
  require(n > 0, "TimeSampler::draw: n must be positive");
  Vec out(n);
  if (kind == Kind::uniform) {
    for (Index j = 0; j < n; ++j) out(j) = from_uniform(stream.uniform());
  } else {
    for (Index j = 0; j < n; ++j) out(j) = from_normal(stream.normal());
  }
  return out;
}

TimeSampler::Kind time_sampler_kind_from_name(std::string_view name) {
  if (name == "uniform") return TimeSampler::Kind::uniform;
  if (name == "logit_normal") return TimeSampler::Kind::logit_normal;
  throw std::invalid_argument("unknown time sampler kind: " + std::string(name));
}

namespace {

struct BatchLoss {
  double loss;
  Mat upstream;  // d(loss)/d(velocity prediction), per column
};

BatchLoss weighted_squared_error(const Mat& predictions, const Mat& targets, const Vec& ts,
                                 const LossWeight& weight) {
  const Index n = predictions.cols();
  const double inv_n = 1.0 / static_cast<double>(n);
  Mat resid = predictions - targets;
  CompensatedSum acc;
  Mat upstream(resid.rows(), n);
  for (Index j = 0; j < n; ++j) {
    const double w = weight(ts(j));
    require(w >= 0.0 && std::isfinite(w), "loss weight must be finite and nonnegative");
    acc.add(w * resid.col(j).squaredNorm());
    upstream.col(j) = (2.0 * w * inv_n) * resid.col(j);
  }
  return {acc.value() * inv_n, std::move(upstream)};
}

void check_batch(const TrainableVelocity& model, const Mat& x0, const Mat& x1, const Vec& ts) {
  require(x0.rows() == model.dim() && x1.rows() == model.dim(),
          "rf_loss: sample dimension does not match the model");
  require(x0.cols() == x1.cols() && ts.size() == x0.cols(),
          "rf_loss: x0, x1 and ts must agree on the batch size");
  require(x0.cols() > 0, "rf_loss: empty batch");
}

}  // namespace

double rf_loss(const TrainableVelocity& model, const Mat& x0, const Mat& x1, const Vec& ts,
               const LossWeight& weight) {
  check_batch(model, x0, x1, ts);
  VelocityTrainCache cache;
  const Mat v = model.train_forward(interpolate(x0, x1, ts), ts, cache);
  return weighted_squared_error(v, slope_target(x0, x1), ts, weight).loss;
}

LossAndGrads rf_loss_and_grads(const TrainableVelocity& model, const Mat& x0, const Mat& x1,
                               const Vec& ts, const LossWeight& weight) {
  check_batch(model, x0, x1, ts);
  VelocityTrainCache cache;
  const Mat v = model.train_forward(interpolate(x0, x1, ts), ts, cache);
  BatchLoss bl = weighted_squared_error(v, slope_target(x0, x1), ts, weight);
  if (!std::isfinite(bl.loss)) throw DivergenceError("rf_loss_and_grads: non-finite loss");
  return {bl.loss, model.train_backward(cache, bl.upstream)};
}

TrainResult train(TrainableVelocity& model, std::shared_ptr<const DataDistribution> data,
                  const TrainConfig& config, std::uint64_t seed, const ProgressFn& progress) {
  require(data != nullptr, "train: null data distribution");
  require(data->dim() == model.dim(), "train: data dimension does not match the model");
  require(config.steps > 0 && config.batch_size > 0, "train: steps and batch_size must be positive");
  require(config.log_every > 0, "train: log_every must be positive");

  CouplingSampler coupling(std::move(data), seed);
  AdamState adam(model.net(), config.adam);
  TrainResult result;
  for (Index k = 0; k < config.steps; ++k) {
    const auto [x0, x1] = coupling.sample(config.batch_size);
    RngStream time_stream(seed, "train.time", static_cast<std::uint64_t>(k));
    const Vec ts = config.time_sampler.draw(config.batch_size, time_stream);
    LossAndGrads lg;
    try {
      lg = rf_loss_and_grads(model, x0, x1, ts, config.weight);
    } catch (const DivergenceError& e) {
      throw DivergenceError("training step " + std::to_string(k) + ": " + e.what());
    }
    adam.step(model.net(), lg.grads);
    if (k % config.log_every == 0 || k + 1 == config.steps) {
      result.history.push_back({k, lg.loss});
      if (progress) progress(k, lg.loss);
    }
  }
  result.final_loss = result.history.back().loss;
  return result;
}

}  // namespace brf
