#include "boundary_rf/samplers.hpp"

#include <cmath>
#include <string>

#include "boundary_rf/rng.hpp"

namespace brf {

namespace {

// Independent substream per (sample, step) pair so draws never depend on
// batch layout or on which steps actually consumed noise.
Mat step_noise(Index dim, Index n, std::uint64_t seed, std::string_view tag, Index step) {
  require(step >= 0 && static_cast<std::uint64_t>(step) < (std::uint64_t{1} << 32),
          "step_noise: step index out of range");
  Mat xi(dim, n);
  for (Index j = 0; j < n; ++j) {
    const std::uint64_t index =
        (static_cast<std::uint64_t>(j) << 32) | static_cast<std::uint64_t>(step);
    RngStream stream(seed, tag, index);
    xi.col(j) = stream.normal_vector(dim);
  }
  return xi;
}

void check_state(const Mat& z, Index step) {
  if (!z.allFinite())
    throw DivergenceError("sampler state became non-finite at step " + std::to_string(step));
}

void record(Trajectory* trajectory, double t, const Mat& z) {
  if (trajectory == nullptr) return;
  trajectory->times.push_back(t);
  trajectory->states.push_back(z);
}

void check_initial(const VelocityField& field, const Mat& z) {
  require(z.rows() == field.dim(), "sampler: initial state dimension mismatch");
  require(z.cols() > 0, "sampler: empty batch");
}

}  // namespace

Mat standard_normal_matrix(Index dim, Index n, std::uint64_t seed, std::string_view tag) {
  require(dim > 0 && n > 0, "standard_normal_matrix: empty shape");
  Mat out(dim, n);
  for (Index j = 0; j < n; ++j) {
    RngStream stream(seed, tag, static_cast<std::uint64_t>(j));
    out.col(j) = stream.normal_vector(dim);
  }
  return out;
}

Mat euler_sample(const VelocityField& field, const TimeGrid& grid, Mat z,
                 Trajectory* trajectory) {
  check_initial(field, z);
  record(trajectory, grid[0], z);
  for (Index i = 0; i < grid.steps(); ++i) {
    const double t = grid[i];
    const double dt = grid[i + 1] - grid[i];
    z += dt * field.eval_batch(z, t);
    check_state(z, i);
    record(trajectory, grid[i + 1], z);
  }
  return z;
}

Mat langevin_sample(const VelocityField& field, const TimeGrid& grid, Mat z,
                    const SigmaSchedule& sigma, std::uint64_t seed, const TweedieOptions& tweedie,
                    Trajectory* trajectory) {
  check_initial(field, z);
  record(trajectory, grid[0], z);
  for (Index i = 0; i < grid.steps(); ++i) {
    const double t = grid[i];
    const double dt = grid[i + 1] - grid[i];
    const double s = sigma(t);
    require(s >= 0.0, "langevin_sample: sigma schedule must be nonnegative");
    if (s == 0.0) {
      // Drift-only step, kept textually identical to the Euler update so
      // the sigma == 0 schedule reproduces Euler exactly.
      z += dt * field.eval_batch(z, t);
    } else {
      const Mat v = field.eval_batch(z, t);
      const Mat score = tweedie_score_batch(field, z, t, tweedie).values;
      z += dt * (v + s * score) +
           std::sqrt(2.0 * s * dt) * step_noise(z.rows(), z.cols(), seed, "langevin.xi", i);
    }
    check_state(z, i);
    record(trajectory, grid[i + 1], z);
  }
  return z;
}

double curved_euler_noise_fraction(double t, double t_next) {
  require(0.0 <= t && t < t_next && t_next <= 1.0,
          "curved_euler_noise_fraction: need 0 <= t < t_next <= 1");
  return 1.0 - t * (1.0 - t_next) / (t_next * (1.0 - t));
}

Mat curved_euler_sample(const VelocityField& field, const TimeGrid& grid, Mat z,
                        std::uint64_t seed, Trajectory* trajectory) {
  check_initial(field, z);
  record(trajectory, grid[0], z);
  for (Index i = 0; i < grid.steps(); ++i) {
    const double t = grid[i];
    const double s = grid[i + 1];
    const double alpha = curved_euler_noise_fraction(t, s);
    const double keep = 1.0 - alpha;
    const double fresh = std::sqrt(std::max(0.0, 1.0 - keep * keep));
    const Mat v = field.eval_batch(z, t);
    const Mat z_end = z + (1.0 - t) * v;  // straight-line guess of the endpoint
    Mat z_start = keep * (z - t * v);     // partially renoised guess of the start
    if (fresh != 0.0)
      z_start += fresh * step_noise(z.rows(), z.cols(), seed, "curved.xi", i);
    z = s * z_end + (1.0 - s) * z_start;
    check_state(z, i);
    record(trajectory, grid[i + 1], z);
  }
  return z;
}

OvershootCoeffs overshoot_coeffs(double c, double t, double t_next) {
  require(c >= 0.0, "overshoot_coeffs: c must be nonnegative");
  require(0.0 <= t && t < t_next && t_next <= 1.0, "overshoot_coeffs: need 0 <= t < t_next <= 1");
  const double o = std::min(t_next + c * (t_next - t), 1.0);
  const double a = t_next / o;
  const double tail = a * (1.0 - o);
  const double u = 1.0 - t_next;
  // Difference-of-squares form: immune to FMA contraction, so c = 0
  // (where tail == u bitwise) yields exactly zero noise.
  double b_sq = (u - tail) * (u + tail);
  if (b_sq < 0.0) {
    if (b_sq < -1e-15)
      throw DivergenceError("overshoot_coeffs: noise variance went negative beyond rounding");
    b_sq = 0.0;
  }
  return {o, a, std::sqrt(b_sq)};
}

Mat overshoot_sample(const VelocityField& field, const TimeGrid& grid, Mat z, double c,
                     std::uint64_t seed, Trajectory* trajectory) {
  check_initial(field, z);
  record(trajectory, grid[0], z);
  for (Index i = 0; i < grid.steps(); ++i) {
    const double t = grid[i];
    const auto [o, a, b] = overshoot_coeffs(c, t, grid[i + 1]);
    z += (o - t) * field.eval_batch(z, t);
    if (a != 1.0) z *= a;
    if (b != 0.0) z += b * step_noise(z.rows(), z.cols(), seed, "overshoot.xi", i);
    check_state(z, i);
    record(trajectory, grid[i + 1], z);
  }
  return z;
}

}  // namespace brf
