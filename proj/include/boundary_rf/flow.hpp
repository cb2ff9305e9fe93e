#pragma once

#include <memory>
#include <utility>

#include "boundary_rf/common.hpp"
#include "boundary_rf/distributions.hpp"
#include "boundary_rf/rng.hpp"

namespace brf {

/// Straight-line interpolation (1-t)*x0 + t*x1, componentwise.
/// Works on points and on whole batches (any matching Eigen expressions).
template <class A, class B>
typename A::PlainObject interpolate(const Eigen::MatrixBase<A>& x0, const Eigen::MatrixBase<B>& x1,
                                    double t) {
  require(x0.rows() == x1.rows() && x0.cols() == x1.cols(), "interpolate: shape mismatch");
  require(t >= 0.0 && t <= 1.0, "interpolate: t outside [0,1]");
  return (1.0 - t) * x0 + t * x1;
}

/// Per-column interpolation times: column j of the result is
/// (1 - t[j]) * x0.col(j) + t[j] * x1.col(j).
template <class A, class B>
typename A::PlainObject interpolate(const Eigen::MatrixBase<A>& x0, const Eigen::MatrixBase<B>& x1,
                                    const Vec& t) {
  require(x0.rows() == x1.rows() && x0.cols() == x1.cols(), "interpolate: shape mismatch");
  require(t.size() == x0.cols(), "interpolate: one time per column required");
  require((t.array() >= 0.0).all() && (t.array() <= 1.0).all(), "interpolate: t outside [0,1]");
  const auto tr = t.transpose().array();
  return (x0.array().rowwise() * (1.0 - tr) + x1.array().rowwise() * tr).matrix();
}

/// Slope of the linear path, x1 - x0; the regression target of the flow
/// objective.
template <class A, class B>
typename A::PlainObject slope_target(const Eigen::MatrixBase<A>& x0,
                                     const Eigen::MatrixBase<B>& x1) {
  require(x0.rows() == x1.rows() && x0.cols() == x1.cols(), "slope_target: shape mismatch");
  return x1 - x0;
}

/// Strictly increasing times t0 = 0 < t1 < ... < tN = 1.
class TimeGrid {
 public:
  explicit TimeGrid(Vec times) : times_(std::move(times)) {
    require(times_.size() >= 2, "TimeGrid: needs at least two points");
    require(times_[0] == 0.0, "TimeGrid: must start at 0");
    require(times_[times_.size() - 1] == 1.0, "TimeGrid: must end at 1");
    for (Index i = 0; i + 1 < times_.size(); ++i) {
      require(times_[i] < times_[i + 1], "TimeGrid: times must be strictly increasing");
    }
  }

  const Vec& times() const { return times_; }
  Index steps() const { return times_.size() - 1; }
  double operator[](Index i) const { return times_[i]; }

 private:
  Vec times_;
};

/// Uniform grid with t_k = k / n_steps.
TimeGrid make_time_grid(Index n_steps);

/// Independent coupling (X0, X1) ~ pi0 x pi1 with pi0 = N(0, I).
/// Each sample owns two RNG substreams (noise and data) addressed by a
/// global sample index, so batches are bit-reproducible regardless of
/// batching, interleaving, or parallel dispatch.
class CouplingSampler {
 public:
  CouplingSampler(std::shared_ptr<const DataDistribution> data, std::uint64_t seed)
      : data_(std::move(data)), seed_(seed) {
    require(data_ != nullptr, "CouplingSampler: null data distribution");
  }

  /// n pairs at explicit sample indices [first_index, first_index + n).
  std::pair<Mat, Mat> sample_at(Index n, std::uint64_t first_index) const;

  /// n pairs at the cursor; advances the cursor.
  std::pair<Mat, Mat> sample(Index n);

  /// Data-only draws on a caller-chosen substream tag (used e.g. for the
  /// data-mean estimate, which must not touch the training stream).
  Mat sample_data_only(Index n, std::string_view tag, std::uint64_t first_index = 0) const;

  const DataDistribution& data() const { return *data_; }
  Index dim() const { return data_->dim(); }
  std::uint64_t seed() const { return seed_; }

 private:
  std::shared_ptr<const DataDistribution> data_;
  std::uint64_t seed_;
  std::uint64_t cursor_ = 0;
};

}  // namespace brf
