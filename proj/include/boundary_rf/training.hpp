#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "boundary_rf/common.hpp"
#include "boundary_rf/distributions.hpp"
#include "boundary_rf/mlp.hpp"
#include "boundary_rf/rng.hpp"
#include "boundary_rf/velocity.hpp"

namespace brf {

/// Per-example regression times, kept inside [1e-6, 1 - 1e-6].
struct TimeSampler {
  enum class Kind { uniform, logit_normal };

  Kind kind = Kind::uniform;
  double logit_mean = 0.0;
  double logit_std = 1.0;

  static constexpr double kEdge = 1e-6;

  /// Uniform kind as a transform of u ~ U[0,1).
  double from_uniform(double u) const;
  /// Logit-normal kind as a transform of z ~ N(0,1).
  double from_normal(double z) const;

  Vec draw(Index n, RngStream& stream) const;
};

TimeSampler::Kind time_sampler_kind_from_name(std::string_view name);

/// Time weighting of the squared-error objective; identically `scale`
/// unless a custom profile is installed.
struct LossWeight {
  double scale = 1.0;
  std::function<double(double)> profile;

  double operator()(double t) const { return profile ? scale * profile(t) : scale; }
};

/// Mean weighted squared error of the velocity against the path slope:
///   (1/n) sum_j w(t_j) || v(x_t_j, t_j) - (x1_j - x0_j) ||^2
double rf_loss(const TrainableVelocity& model, const Mat& x0, const Mat& x1, const Vec& ts,
               const LossWeight& weight = {});

struct LossAndGrads {
  double loss = 0.0;
  MlpGrads grads;
};

/// Loss plus exact parameter gradients through the model's own backward.
LossAndGrads rf_loss_and_grads(const TrainableVelocity& model, const Mat& x0, const Mat& x1,
                               const Vec& ts, const LossWeight& weight = {});

struct TrainConfig {
  Index steps = 2000;
  Index batch_size = 256;
  AdamConfig adam;
  TimeSampler time_sampler;
  LossWeight weight;
  Index log_every = 100;
};

struct LossRecord {
  Index step;
  double loss;
};

struct TrainResult {
  std::vector<LossRecord> history;  // every log_every steps plus the last step
  double final_loss = 0.0;
};

using ProgressFn = std::function<void(Index step, double loss)>;

/// Minibatch Adam on the flow-matching objective. Fully deterministic per
/// (model, data, config, seed): couplings come from per-sample substreams
/// and regression times from a per-step substream.
TrainResult train(TrainableVelocity& model, std::shared_ptr<const DataDistribution> data,
                  const TrainConfig& config, std::uint64_t seed, const ProgressFn& progress = {});

}  // namespace brf
