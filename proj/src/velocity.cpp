#include "boundary_rf/velocity.hpp"

#include <cmath>

#include "boundary_rf/rng.hpp"

namespace brf {

Vec VelocityField::eval(const Vec& x, double t) const {
  Mat xs(x.size(), 1);
  xs.col(0) = x;
  return eval_batch(xs, t).col(0);
}

Mat VanillaVelocity::eval_batch(const Mat& xs, double t) const {
  return net_.forward_batch(xs, t);
}

Mat VanillaVelocity::train_forward(const Mat& xs, const Vec& ts, VelocityTrainCache& cache) const {
  return net_.forward_batch(xs, ts, &cache.main);
}

MlpGrads VanillaVelocity::train_backward(const VelocityTrainCache& cache,
                                         const Mat& upstream) const {
  return net_.backward(cache.main, upstream);
}

MaskBoundaryVelocity::MaskBoundaryVelocity(MlpArch arch, std::uint64_t seed,
                                           BoundaryFunctionSet boundary, Vec data_mean)
    : net_(std::move(arch), seed), boundary_(std::move(boundary)), data_mean_(std::move(data_mean)) {
  require(data_mean_.size() == net_.arch().data_dim,
          "MaskBoundaryVelocity: data mean dimension mismatch");
}

MaskBoundaryVelocity::MaskBoundaryVelocity(Mlp net, BoundaryFunctionSet boundary, Vec data_mean)
    : net_(std::move(net)), boundary_(std::move(boundary)), data_mean_(std::move(data_mean)) {
  require(data_mean_.size() == net_.arch().data_dim,
          "MaskBoundaryVelocity: data mean dimension mismatch");
}

Mat MaskBoundaryVelocity::eval_batch(const Mat& xs, double t) const {
  const auto [g, f, h] = boundary_.eval(t);
  Mat v = g * ((-xs).colwise() + data_mean_) + f * xs;
  // Skip the backbone when its coefficient vanishes so the endpoint
  // values cannot pick up rounding noise from the network.
  if (h != 0.0) v.noalias() += h * net_.forward_batch(xs, t);
  return v;
}

Mat MaskBoundaryVelocity::train_forward(const Mat& xs, const Vec& ts,
                                        VelocityTrainCache& cache) const {
  const Mat raw = net_.forward_batch(xs, ts, &cache.main);
  cache.mask_scale.resize(ts.size());
  Mat v(xs.rows(), xs.cols());
  for (Index j = 0; j < xs.cols(); ++j) {
    const auto [g, f, h] = boundary_.eval(ts(j));
    cache.mask_scale(j) = h;
    v.col(j) = g * (data_mean_ - xs.col(j)) + f * xs.col(j) + h * raw.col(j);
  }
  return v;
}

MlpGrads MaskBoundaryVelocity::train_backward(const VelocityTrainCache& cache,
                                              const Mat& upstream) const {
  // d v / d m = h(t_j), per sample.
  const Mat scaled = upstream.array().rowwise() * cache.mask_scale.transpose().array();
  return net_.backward(cache.main, scaled);
}

Mat SubtractionBoundaryVelocity::eval_batch(const Mat& xs, double t) const {
  if (t == 1.0) return xs;  // the two passes cancel identically
  return xs + net_.forward_batch(xs, t) - net_.forward_batch(xs, 1.0);
}

Mat SubtractionBoundaryVelocity::train_forward(const Mat& xs, const Vec& ts,
                                               VelocityTrainCache& cache) const {
  const Mat at_t = net_.forward_batch(xs, ts, &cache.main);
  const Mat at_one = net_.forward_batch(xs, 1.0, &cache.at_one);
  return xs + at_t - at_one;
}

MlpGrads SubtractionBoundaryVelocity::train_backward(const VelocityTrainCache& cache,
                                                     const Mat& upstream) const {
  // Gradients flow through both passes; the anchor pass enters negated.
  MlpGrads grads = net_.backward(cache.main, upstream);
  grads -= net_.backward(cache.at_one, upstream);
  return grads;
}

namespace {

// Per-coordinate variance of the interpolation marginal.
Vec marginal_variance(double t, const GaussianSpec& target) {
  const double s = 1.0 - t;
  return (s * s + t * t * target.var.array()).matrix();
}

}  // namespace

Vec gaussian_oracle_velocity(const Vec& x, double t, const GaussianSpec& target) {
  require(x.size() == target.mean.size(), "gaussian_oracle_velocity: dimension mismatch");
  const Vec v_t = marginal_variance(t, target);
  const auto coef = (t * target.var.array() - (1.0 - t)) / v_t.array();
  return (target.mean.array() + coef * (x.array() - t * target.mean.array())).matrix();
}

Mat gaussian_oracle_velocity(const Mat& xs, double t, const GaussianSpec& target) {
  require(xs.rows() == target.mean.size(), "gaussian_oracle_velocity: dimension mismatch");
  const Vec v_t = marginal_variance(t, target);
  const Vec coef = ((t * target.var.array() - (1.0 - t)) / v_t.array()).matrix();
  Mat centered = xs.colwise() - (t * target.mean).eval();
  return (centered.array().colwise() * coef.array()).matrix().colwise() + target.mean;
}

Vec gaussian_oracle_score(const Vec& x, double t, const GaussianSpec& target) {
  require(x.size() == target.mean.size(), "gaussian_oracle_score: dimension mismatch");
  const Vec v_t = marginal_variance(t, target);
  return (-(x.array() - t * target.mean.array()) / v_t.array()).matrix();
}

Mat gaussian_oracle_score(const Mat& xs, double t, const GaussianSpec& target) {
  require(xs.rows() == target.mean.size(), "gaussian_oracle_score: dimension mismatch");
  const Vec v_t = marginal_variance(t, target);
  Mat centered = xs.colwise() - (t * target.mean).eval();
  return (centered.array().colwise() * (-1.0 / v_t.array())).matrix();
}

Vec estimate_data_mean(const DataDistribution& data, Index n_samples, std::uint64_t seed) {
  require(n_samples > 0, "estimate_data_mean: n_samples must be positive");
  Vec acc = Vec::Zero(data.dim());
  for (Index j = 0; j < n_samples; ++j) {
    RngStream stream(seed, "data_mean.draw", static_cast<std::uint64_t>(j));
    acc += data.draw(stream);
  }
  return acc / static_cast<double>(n_samples);
}

std::unique_ptr<TrainableVelocity> make_velocity_model(std::string_view kind, MlpArch arch,
                                                       std::uint64_t seed,
                                                       const BoundaryFunctionSet* boundary,
                                                       const Vec* data_mean) {
  if (kind == "vanilla") return std::make_unique<VanillaVelocity>(std::move(arch), seed);
  if (kind == "subtraction")
    return std::make_unique<SubtractionBoundaryVelocity>(std::move(arch), seed);
  if (kind == "mask") {
    require(boundary != nullptr, "make_velocity_model: mask kind needs a boundary set");
    require(data_mean != nullptr, "make_velocity_model: mask kind needs a data mean");
    return std::make_unique<MaskBoundaryVelocity>(std::move(arch), seed, *boundary, *data_mean);
  }
  throw std::invalid_argument("unknown velocity model kind: " + std::string(kind));
}

}  // namespace brf
