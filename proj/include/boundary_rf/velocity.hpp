#pragma once

#include <memory>
#include <string_view>

#include "boundary_rf/boundary_functions.hpp"
#include "boundary_rf/common.hpp"
#include "boundary_rf/distributions.hpp"
#include "boundary_rf/mlp.hpp"

namespace brf {

class VelocityField {
 public:
  virtual ~VelocityField() = default;
  virtual Index dim() const = 0;
  /// One column per sample, shared time.
  virtual Mat eval_batch(const Mat& xs, double t) const = 0;
  virtual Vec eval(const Vec& x, double t) const;
};

/// Forward-pass state a trainable model keeps around for its backward pass.
struct VelocityTrainCache {
  MlpForwardCache main;
  MlpForwardCache at_one;  // used by the subtraction parameterization
  Vec mask_scale;          // used by the mask parameterization: h(t_j) per sample
};

class TrainableVelocity : public VelocityField {
 public:
  virtual std::string_view kind() const = 0;
  /// Velocity predictions with per-sample times, caching for train_backward.
  virtual Mat train_forward(const Mat& xs, const Vec& ts, VelocityTrainCache& cache) const = 0;
  /// Parameter gradients of sum_j <upstream.col(j), v(x_j, t_j)>.
  virtual MlpGrads train_backward(const VelocityTrainCache& cache, const Mat& upstream) const = 0;
  virtual Mlp& net() = 0;
  virtual const Mlp& net() const = 0;
  virtual const BoundaryFunctionSet* boundary_set() const { return nullptr; }
  virtual const Vec* data_mean() const { return nullptr; }
};

/// v(x,t) = m(x,t), no structural constraints.
class VanillaVelocity final : public TrainableVelocity {
 public:
  VanillaVelocity(MlpArch arch, std::uint64_t seed) : net_(std::move(arch), seed) {}
  explicit VanillaVelocity(Mlp net) : net_(std::move(net)) {}

  Index dim() const override { return net_.arch().data_dim; }
  Mat eval_batch(const Mat& xs, double t) const override;
  std::string_view kind() const override { return "vanilla"; }
  Mat train_forward(const Mat& xs, const Vec& ts, VelocityTrainCache& cache) const override;
  MlpGrads train_backward(const VelocityTrainCache& cache, const Mat& upstream) const override;
  Mlp& net() override { return net_; }
  const Mlp& net() const override { return net_; }

 private:
  Mlp net_;
};

/// v(x,t) = g(t) (C - x) + f(t) x + h(t) m(x,t).
/// The endpoint values of (g, f, h) pin v(x,1) = x and v(x,0) = C - x
/// regardless of the network.
class MaskBoundaryVelocity final : public TrainableVelocity {
 public:
  MaskBoundaryVelocity(MlpArch arch, std::uint64_t seed, BoundaryFunctionSet boundary,
                       Vec data_mean);
  MaskBoundaryVelocity(Mlp net, BoundaryFunctionSet boundary, Vec data_mean);

  Index dim() const override { return net_.arch().data_dim; }
  Mat eval_batch(const Mat& xs, double t) const override;
  std::string_view kind() const override { return "mask"; }
  Mat train_forward(const Mat& xs, const Vec& ts, VelocityTrainCache& cache) const override;
  MlpGrads train_backward(const VelocityTrainCache& cache, const Mat& upstream) const override;
  Mlp& net() override { return net_; }
  const Mlp& net() const override { return net_; }
  const BoundaryFunctionSet* boundary_set() const override { return &boundary_; }
  const Vec* data_mean() const override { return &data_mean_; }

 private:
  Mlp net_;
  BoundaryFunctionSet boundary_;
  Vec data_mean_;
};

/// v(x,t) = x + m(x,t) - m(x,1). Exactly two backbone passes; at t = 1 the
/// passes coincide and the network contribution cancels, leaving v = x.
class SubtractionBoundaryVelocity final : public TrainableVelocity {
 public:
  SubtractionBoundaryVelocity(MlpArch arch, std::uint64_t seed) : net_(std::move(arch), seed) {}
  explicit SubtractionBoundaryVelocity(Mlp net) : net_(std::move(net)) {}

  Index dim() const override { return net_.arch().data_dim; }
  Mat eval_batch(const Mat& xs, double t) const override;
  std::string_view kind() const override { return "subtraction"; }
  Mat train_forward(const Mat& xs, const Vec& ts, VelocityTrainCache& cache) const override;
  MlpGrads train_backward(const VelocityTrainCache& cache, const Mat& upstream) const override;
  Mlp& net() override { return net_; }
  const Mlp& net() const override { return net_; }

 private:
  Mlp net_;
};

/// Closed-form optimal velocity for a diagonal-Gaussian target coupled
/// independently to a standard-normal source:
///   V_i(t) = (1-t)^2 + t^2 var_i
///   v_i(x,t) = mean_i + (t var_i - (1-t)) (x_i - t mean_i) / V_i(t)
Vec gaussian_oracle_velocity(const Vec& x, double t, const GaussianSpec& target);
Mat gaussian_oracle_velocity(const Mat& xs, double t, const GaussianSpec& target);

/// Marginal score of the same interpolation:
///   score_i(x,t) = -(x_i - t mean_i) / V_i(t)
Vec gaussian_oracle_score(const Vec& x, double t, const GaussianSpec& target);
Mat gaussian_oracle_score(const Mat& xs, double t, const GaussianSpec& target);

class GaussianOracleVelocity final : public VelocityField {
 public:
  explicit GaussianOracleVelocity(GaussianSpec target) : target_(std::move(target)) {}

  Index dim() const override { return target_.mean.size(); }
  Mat eval_batch(const Mat& xs, double t) const override {
    return gaussian_oracle_velocity(xs, t, target_);
  }
  const GaussianSpec& target() const { return target_; }

 private:
  GaussianSpec target_;
};

/// Monte Carlo mean of the data distribution, deterministic per seed.
Vec estimate_data_mean(const DataDistribution& data, Index n_samples, std::uint64_t seed);

/// kind is one of "vanilla", "mask", "subtraction". The mask kind requires
/// a boundary set and data mean; the others ignore them.
std::unique_ptr<TrainableVelocity> make_velocity_model(std::string_view kind, MlpArch arch,
                                                       std::uint64_t seed,
                                                       const BoundaryFunctionSet* boundary,
                                                       const Vec* data_mean);

}  // namespace brf
