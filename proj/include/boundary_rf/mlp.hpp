#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "boundary_rf/common.hpp"

namespace brf {

enum class Activation { silu, tanh, relu };

Activation activation_from_name(std::string_view name);
std::string_view activation_name(Activation a);

/// (t, sin(2*pi*t*2^0), cos(2*pi*t*2^0), ..., sin(2*pi*t*2^(K-1)), cos(...)),
/// length 2K+1.
Vec time_embed(double t, int frequencies);

/// Backbone shape: dense stack on the concatenation (x, time_embed(t)).
/// Output dimension equals the data dimension.
struct MlpArch {
  Index data_dim = 0;
  std::vector<Index> hidden;
  int time_frequencies = 8;
  Activation activation = Activation::silu;

  Index input_dim() const { return data_dim + 2 * time_frequencies + 1; }
  Index output_dim() const { return data_dim; }
  Index layer_count() const { return static_cast<Index>(hidden.size()) + 1; }
  /// (rows, cols) of each weight matrix.
  std::vector<std::pair<Index, Index>> layer_shapes() const;
  void validate() const;

  bool operator==(const MlpArch&) const = default;
};

/// Parameter-shaped gradient container.
struct MlpGrads {
  std::vector<Mat> weights;
  std::vector<Vec> biases;

  MlpGrads& operator-=(const MlpGrads& other);
  MlpGrads& operator*=(double s);
  bool all_finite() const;
};

/// Intermediate activations kept by a forward pass for the backward pass.
struct MlpForwardCache {
  std::vector<Mat> layer_inputs;      // input to each linear layer
  std::vector<Mat> pre_activations;   // hidden-layer pre-activations
};

/// Dense network m(x, t). All math is in 64-bit; forward/backward are
/// pure functions of (params, inputs).
class Mlp {
 public:
  /// Variance-scaled normal init (var = 2/(fan_in+fan_out)), zero biases,
  /// deterministic per seed.
  Mlp(MlpArch arch, std::uint64_t seed);

  /// Adopt existing parameters (checkpoint load).
  Mlp(MlpArch arch, std::vector<Mat> weights, std::vector<Vec> biases);

  const MlpArch& arch() const { return arch_; }
  const std::vector<Mat>& weights() const { return weights_; }
  const std::vector<Vec>& biases() const { return biases_; }
  std::vector<Mat>& mutable_weights() { return weights_; }
  std::vector<Vec>& mutable_biases() { return biases_; }

  Vec forward(const Vec& x, double t) const;

  /// Batched forward, one column per sample, per-sample times.
  Mat forward_batch(const Mat& xs, const Vec& ts, MlpForwardCache* cache = nullptr) const;

  /// Batched forward with one shared time (samplers evaluate whole
  /// batches at a single grid time).
  Mat forward_batch(const Mat& xs, double t, MlpForwardCache* cache = nullptr) const;

  /// Exact reverse-mode gradients of sum_j <upstream.col(j), m(x_j, t_j)>
  /// with respect to every weight and bias.
  MlpGrads backward(const MlpForwardCache& cache, const Mat& upstream) const;

  MlpGrads zero_grads() const;
  Index parameter_count() const;

 private:
  Mat run(Mat input, MlpForwardCache* cache) const;

  MlpArch arch_;
  std::vector<Mat> weights_;
  std::vector<Vec> biases_;
};

/// Single-sample convenience: gradients of <upstream, m(x, t)>.
MlpGrads mlp_point_gradients(const Mlp& net, const Vec& x, double t, const Vec& upstream);

struct AdamConfig {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

/// Bias-corrected Adam over the Mlp parameters.
class AdamState {
 public:
  AdamState(const Mlp& net, AdamConfig config);

  void step(Mlp& net, const MlpGrads& grads);

  std::int64_t step_count() const { return step_; }
  const AdamConfig& config() const { return config_; }

 private:
  AdamConfig config_;
  std::vector<Mat> m_weights_, v_weights_;
  std::vector<Vec> m_biases_, v_biases_;
  std::int64_t step_ = 0;
};

}  // namespace brf
