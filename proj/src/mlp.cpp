#include "boundary_rf/mlp.hpp"

#include <cmath>
#include <numbers>
#include <utility>

#include "boundary_rf/rng.hpp"

namespace brf {

namespace {

void apply_activation_in_place(Mat& a, Activation act) {
  switch (act) {
    case Activation::silu: {
      const auto s = (1.0 / (1.0 + (-a.array()).exp())).eval();
      a.array() *= s;
      break;
    }
    case Activation::tanh:
      a = a.array().tanh().matrix();
      break;
    case Activation::relu:
      a = a.cwiseMax(0.0);
      break;
  }
}

// Derivative w.r.t. the pre-activation.
Mat activation_derivative(const Mat& pre, Activation act) {
  switch (act) {
    case Activation::silu: {
      const auto s = (1.0 / (1.0 + (-pre.array()).exp())).eval();
      return (s * (1.0 + pre.array() * (1.0 - s))).matrix();
    }
    case Activation::tanh: {
      const auto th = pre.array().tanh();
      return (1.0 - th.square()).matrix();
    }
    case Activation::relu:
      return (pre.array() > 0.0).cast<double>().matrix();
  }
  throw std::logic_error("unreachable activation");
}

}  // namespace

Activation activation_from_name(std::string_view name) {
  if (name == "silu") return Activation::silu;
  if (name == "tanh") return Activation::tanh;
  if (name == "relu") return Activation::relu;
  throw std::invalid_argument("unknown activation: " + std::string(name));
}

std::string_view activation_name(Activation a) {
  switch (a) {
    case Activation::silu: return "silu";
    case Activation::tanh: return "tanh";
    case Activation::relu: return "relu";
  }
  throw std::logic_error("unreachable activation");
}

Vec time_embed(double t, int frequencies) {
  require(frequencies >= 0, "time_embed: frequencies must be >= 0");
  Vec e(2 * frequencies + 1);
  e(0) = t;
  double freq = 1.0;
  for (int j = 0; j < frequencies; ++j) {
    const double phase = 2.0 * std::numbers::pi * t * freq;
    e(1 + 2 * j) = std::sin(phase);
    e(2 + 2 * j) = std::cos(phase);
    freq *= 2.0;
  }
  return e;
}

std::vector<std::pair<Index, Index>> MlpArch::layer_shapes() const {
  std::vector<std::pair<Index, Index>> shapes;
  Index in = input_dim();
  for (const Index h : hidden) {
    shapes.emplace_back(h, in);
    in = h;
  }
  shapes.emplace_back(output_dim(), in);
  return shapes;
}

void MlpArch::validate() const {
  require(data_dim > 0, "MlpArch: data_dim must be positive");
  require(time_frequencies >= 0, "MlpArch: time_frequencies must be >= 0");
  for (const Index h : hidden) require(h > 0, "MlpArch: hidden widths must be positive");
}

MlpGrads& MlpGrads::operator-=(const MlpGrads& other) {
  require(weights.size() == other.weights.size(), "MlpGrads: mismatched layer count");
  for (std::size_t l = 0; l < weights.size(); ++l) {
    weights[l] -= other.weights[l];
    biases[l] -= other.biases[l];
  }
  return *this;
}

MlpGrads& MlpGrads::operator*=(double s) {
  for (auto& w : weights) w *= s;
  for (auto& b : biases) b *= s;
  return *this;
}

bool MlpGrads::all_finite() const {
  for (const auto& w : weights)
    if (!w.allFinite()) return false;
  for (const auto& b : biases)
    if (!b.allFinite()) return false;
  return true;
}

Mlp::Mlp(MlpArch arch, std::uint64_t seed) : arch_(std::move(arch)) {
  arch_.validate();
  const auto shapes = arch_.layer_shapes();
  weights_.reserve(shapes.size());
  biases_.reserve(shapes.size());
  for (std::size_t l = 0; l < shapes.size(); ++l) {
    const auto [rows, cols] = shapes[l];
    RngStream stream(seed, "mlp.init", static_cast<std::uint64_t>(l));
    const double stddev = std::sqrt(2.0 / static_cast<double>(rows + cols));
    Mat w(rows, cols);
    // Column-major fill so the layout matches storage order.
    for (Index c = 0; c < cols; ++c)
      for (Index r = 0; r < rows; ++r) w(r, c) = stddev * stream.normal();
    weights_.push_back(std::move(w));
    biases_.push_back(Vec::Zero(rows));
  }
}

Mlp::Mlp(MlpArch arch, std::vector<Mat> weights, std::vector<Vec> biases)
    : arch_(std::move(arch)), weights_(std::move(weights)), biases_(std::move(biases)) {
  arch_.validate();
  const auto shapes = arch_.layer_shapes();
  require(weights_.size() == shapes.size() && biases_.size() == shapes.size(),
          "Mlp: parameter list does not match architecture");
  for (std::size_t l = 0; l < shapes.size(); ++l) {
    require(weights_[l].rows() == shapes[l].first && weights_[l].cols() == shapes[l].second,
            "Mlp: weight shape does not match architecture");
    require(biases_[l].size() == shapes[l].first, "Mlp: bias shape does not match architecture");
  }
}

Mat Mlp::run(Mat input, MlpForwardCache* cache) const {
  const Index layers = arch_.layer_count();
  if (cache != nullptr) {
    cache->layer_inputs.clear();
    cache->pre_activations.clear();
    cache->layer_inputs.reserve(static_cast<std::size_t>(layers));
    cache->pre_activations.reserve(static_cast<std::size_t>(layers) - 1);
  }
  Mat h = std::move(input);
  for (Index l = 0; l < layers; ++l) {
    Mat pre = (weights_[static_cast<std::size_t>(l)] * h).colwise() +
              biases_[static_cast<std::size_t>(l)];
    if (cache != nullptr) cache->layer_inputs.push_back(std::move(h));
    if (l + 1 < layers) {
      if (cache != nullptr) cache->pre_activations.push_back(pre);
      apply_activation_in_place(pre, arch_.activation);
    }
    h = std::move(pre);
  }
  if (!h.allFinite()) throw DivergenceError("Mlp::run: non-finite network output");
  return h;
}

Vec Mlp::forward(const Vec& x, double t) const {
  require(x.size() == arch_.data_dim, "Mlp::forward: wrong input dimension");
  Mat input(arch_.input_dim(), 1);
  input.col(0).head(arch_.data_dim) = x;
  input.col(0).tail(2 * arch_.time_frequencies + 1) = time_embed(t, arch_.time_frequencies);
  return run(std::move(input), nullptr).col(0);
}

Mat Mlp::forward_batch(const Mat& xs, const Vec& ts, MlpForwardCache* cache) const {
  require(xs.rows() == arch_.data_dim, "Mlp::forward_batch: wrong input dimension");
  require(ts.size() == xs.cols(), "Mlp::forward_batch: one time per sample required");
  Mat input(arch_.input_dim(), xs.cols());
  input.topRows(arch_.data_dim) = xs;
  for (Index j = 0; j < xs.cols(); ++j)
    input.col(j).tail(2 * arch_.time_frequencies + 1) = time_embed(ts(j), arch_.time_frequencies);
  return run(std::move(input), cache);
}

Mat Mlp::forward_batch(const Mat& xs, double t, MlpForwardCache* cache) const {
  require(xs.rows() == arch_.data_dim, "Mlp::forward_batch: wrong input dimension");
  Mat input(arch_.input_dim(), xs.cols());
  input.topRows(arch_.data_dim) = xs;
  input.bottomRows(2 * arch_.time_frequencies + 1).colwise() =
      time_embed(t, arch_.time_frequencies);
  return run(std::move(input), cache);
}

MlpGrads Mlp::backward(const MlpForwardCache& cache, const Mat& upstream) const {
  const Index layers = arch_.layer_count();
  require(cache.layer_inputs.size() == static_cast<std::size_t>(layers),
          "Mlp::backward: cache does not match architecture");
  require(upstream.rows() == arch_.output_dim() &&
              upstream.cols() == cache.layer_inputs[0].cols(),
          "Mlp::backward: upstream shape mismatch");
  MlpGrads grads;
  grads.weights.resize(static_cast<std::size_t>(layers));
  grads.biases.resize(static_cast<std::size_t>(layers));
  Mat delta = upstream;
  for (Index l = layers - 1; l >= 0; --l) {
    const auto ul = static_cast<std::size_t>(l);
    grads.weights[ul].noalias() = delta * cache.layer_inputs[ul].transpose();
    grads.biases[ul] = delta.rowwise().sum();
    if (l > 0) {
      Mat back = weights_[ul].transpose() * delta;
      delta = back.cwiseProduct(
          activation_derivative(cache.pre_activations[ul - 1], arch_.activation));
    }
  }
  return grads;
}

MlpGrads Mlp::zero_grads() const {
  MlpGrads grads;
  for (const auto& [rows, cols] : arch_.layer_shapes()) {
    grads.weights.push_back(Mat::Zero(rows, cols));
    grads.biases.push_back(Vec::Zero(rows));
  }
  return grads;
}

Index Mlp::parameter_count() const {
  Index n = 0;
  for (const auto& [rows, cols] : arch_.layer_shapes()) n += rows * cols + rows;
  return n;
}

MlpGrads mlp_point_gradients(const Mlp& net, const Vec& x, double t, const Vec& upstream) {
  MlpForwardCache cache;
  Mat xs(x.size(), 1);
  xs.col(0) = x;
  Vec ts(1);
  ts(0) = t;
  net.forward_batch(xs, ts, &cache);
  Mat up(upstream.size(), 1);
  up.col(0) = upstream;
  return net.backward(cache, up);
}

AdamState::AdamState(const Mlp& net, AdamConfig config) : config_(config) {
  require(config_.learning_rate > 0.0, "AdamState: learning_rate must be positive");
  require(config_.beta1 >= 0.0 && config_.beta1 < 1.0, "AdamState: beta1 must be in [0,1)");
  require(config_.beta2 >= 0.0 && config_.beta2 < 1.0, "AdamState: beta2 must be in [0,1)");
  for (const auto& w : net.weights()) {
    m_weights_.push_back(Mat::Zero(w.rows(), w.cols()));
    v_weights_.push_back(Mat::Zero(w.rows(), w.cols()));
  }
  for (const auto& b : net.biases()) {
    m_biases_.push_back(Vec::Zero(b.size()));
    v_biases_.push_back(Vec::Zero(b.size()));
  }
}

void AdamState::step(Mlp& net, const MlpGrads& grads) {
  require(grads.weights.size() == m_weights_.size(), "AdamState: gradient layer count mismatch");
  if (!grads.all_finite()) throw DivergenceError("AdamState::step: non-finite gradients");
  ++step_;
  const double bc1 = 1.0 - std::pow(config_.beta1, static_cast<double>(step_));
  const double bc2 = 1.0 - std::pow(config_.beta2, static_cast<double>(step_));
  const auto update = [&](auto& param, auto& m, auto& v, const auto& g) {
    m = config_.beta1 * m + (1.0 - config_.beta1) * g;
    v = (config_.beta2 * v.array() + (1.0 - config_.beta2) * g.array().square()).matrix();
    param.array() -=
        config_.learning_rate * (m.array() / bc1) / ((v.array() / bc2).sqrt() + config_.epsilon);
  };
  for (std::size_t l = 0; l < m_weights_.size(); ++l) {
    update(net.mutable_weights()[l], m_weights_[l], v_weights_[l], grads.weights[l]);
    update(net.mutable_biases()[l], m_biases_[l], v_biases_[l], grads.biases[l]);
  }
}

}  // namespace brf
