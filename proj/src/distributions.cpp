#include "boundary_rf/distributions.hpp"

namespace brf {

IsotropicGaussianMixture::IsotropicGaussianMixture(std::vector<Component> components)
    : components_(std::move(components)) {
  require(!components_.empty(), "mixture: needs at least one component");
  const Index d = components_.front().mean.size();
  double total = 0.0;
  for (const auto& c : components_) {
    require(c.mean.size() == d, "mixture: component dimension mismatch");
    require(c.stddev > 0.0, "mixture: stddev must be positive");
    require(c.weight > 0.0, "mixture: weights must be positive");
    total += c.weight;
  }
  cumulative_.reserve(components_.size());
  double acc = 0.0;
  for (const auto& c : components_) {
    acc += c.weight / total;
    cumulative_.push_back(acc);
  }
  cumulative_.back() = 1.0;  // guard against rounding drift
}

Vec IsotropicGaussianMixture::draw(RngStream& rng) const {
  const double u = rng.uniform();
  std::size_t k = 0;
  while (k + 1 < cumulative_.size() && u >= cumulative_[k]) ++k;
  const Component& c = components_[k];
  return c.mean + c.stddev * rng.normal_vector(c.mean.size());
}

Vec IsotropicGaussianMixture::mean() const {
  Vec m = Vec::Zero(dim());
  double total = 0.0;
  for (const auto& c : components_) total += c.weight;
  for (const auto& c : components_) m += (c.weight / total) * c.mean;
  return m;
}

double IsotropicGaussianMixture::covariance_trace() const {
  // within-component trace + between-component spread
  const Vec mu = mean();
  double total = 0.0;
  for (const auto& c : components_) total += c.weight;
  double tr = 0.0;
  for (const auto& c : components_) {
    const double w = c.weight / total;
    tr += w * (static_cast<double>(dim()) * c.stddev * c.stddev + (c.mean - mu).squaredNorm());
  }
  return tr;
}

}  // namespace brf
