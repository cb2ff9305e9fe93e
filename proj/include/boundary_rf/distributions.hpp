#pragma once

#include <memory>
#include <vector>

#include "boundary_rf/common.hpp"
#include "boundary_rf/rng.hpp"

namespace brf {

/// Diagonal-covariance Gaussian target: mean and per-dimension variances.
/// Small enough to have closed-form optimal velocity and score, which is
/// what makes it the oracle for the whole pipeline.
struct GaussianSpec {
  Vec mean;
  Vec var;

  GaussianSpec(Vec mean_in, Vec var_in) : mean(std::move(mean_in)), var(std::move(var_in)) {
    require(mean.size() == var.size(), "GaussianSpec: mean/var dimension mismatch");
    require(mean.size() >= 1, "GaussianSpec: empty spec");
    require((var.array() > 0.0).all(), "GaussianSpec: variances must be positive");
    require(mean.allFinite() && var.allFinite(), "GaussianSpec: non-finite entries");
  }

  Index dim() const { return mean.size(); }
};

/// A data distribution the coupling sampler can draw from.
class DataDistribution {
 public:
  virtual ~DataDistribution() = default;
  virtual Index dim() const = 0;
  virtual Vec draw(RngStream& rng) const = 0;
  /// Analytic mean (used as ground truth in diagnostics).
  virtual Vec mean() const = 0;
  /// Analytic trace of the covariance.
  virtual double covariance_trace() const = 0;
};

class DiagonalGaussian final : public DataDistribution {
 public:
  explicit DiagonalGaussian(GaussianSpec spec) : spec_(std::move(spec)) {}

  Index dim() const override { return spec_.dim(); }
  Vec draw(RngStream& rng) const override {
    return spec_.mean + (spec_.var.array().sqrt() * rng.normal_vector(spec_.dim()).array()).matrix();
  }
  Vec mean() const override { return spec_.mean; }
  double covariance_trace() const override { return spec_.var.sum(); }

  const GaussianSpec& spec() const { return spec_; }

 private:
  GaussianSpec spec_;
};

/// K-component mixture of isotropic Gaussians; the 2D toy target.
class IsotropicGaussianMixture final : public DataDistribution {
 public:
  struct Component {
    Vec mean;
    double stddev;
    double weight;
  };

  explicit IsotropicGaussianMixture(std::vector<Component> components);

  Index dim() const override { return components_.front().mean.size(); }
  Vec draw(RngStream& rng) const override;
  Vec mean() const override;
  double covariance_trace() const override;

  const std::vector<Component>& components() const { return components_; }

 private:
  std::vector<Component> components_;
  std::vector<double> cumulative_;
};

}  // namespace brf
