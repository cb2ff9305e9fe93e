#include "boundary_rf/flow.hpp"

namespace brf {

TimeGrid make_time_grid(Index n_steps) {
  require(n_steps >= 1, "make_time_grid: n_steps must be >= 1");
  Vec t(n_steps + 1);
  for (Index k = 0; k <= n_steps; ++k) {
    t[k] = static_cast<double>(k) / static_cast<double>(n_steps);
  }
  t[0] = 0.0;
  t[n_steps] = 1.0;
  return TimeGrid(std::move(t));
}

std::pair<Mat, Mat> CouplingSampler::sample_at(Index n, std::uint64_t first_index) const {
  require(n >= 1, "sample_coupling: n must be >= 1");
  const Index d = dim();
  Mat x0(d, n), x1(d, n);
  for (Index j = 0; j < n; ++j) {
    const std::uint64_t idx = first_index + static_cast<std::uint64_t>(j);
    RngStream noise(seed_, "coupling.noise", idx);
    RngStream data(seed_, "coupling.data", idx);
    x0.col(j) = noise.normal_vector(d);
    x1.col(j) = data_->draw(data);
  }
  return {std::move(x0), std::move(x1)};
}

std::pair<Mat, Mat> CouplingSampler::sample(Index n) {
  auto out = sample_at(n, cursor_);
  cursor_ += static_cast<std::uint64_t>(n);
  return out;
}

Mat CouplingSampler::sample_data_only(Index n, std::string_view tag,
                                      std::uint64_t first_index) const {
  require(n >= 1, "sample_data_only: n must be >= 1");
  const Index d = dim();
  Mat x(d, n);
  for (Index j = 0; j < n; ++j) {
    RngStream stream(seed_, tag, first_index + static_cast<std::uint64_t>(j));
    x.col(j) = data_->draw(stream);
  }
  return x;
}

}  // namespace brf
