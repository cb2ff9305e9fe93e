#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "boundary_rf/common.hpp"
#include "boundary_rf/flow.hpp"
#include "boundary_rf/score.hpp"
#include "boundary_rf/velocity.hpp"

namespace brf {

/// Langevin noise scale as a function of time.
struct SigmaSchedule {
  enum class Kind { constant, triangular };

  Kind kind = Kind::triangular;
  double sigma0 = 0.5;

  double operator()(double t) const {
    return kind == Kind::constant ? sigma0 : sigma0 * t * (1.0 - t);
  }

  static SigmaSchedule constant(double s) { return {Kind::constant, s}; }
  static SigmaSchedule triangular(double s0) { return {Kind::triangular, s0}; }
};

/// Optional per-step state recording (times include both grid endpoints).
struct Trajectory {
  std::vector<double> times;
  std::vector<Mat> states;
};

/// Column j is an independent standard-normal draw from the stream
/// (seed, tag, j); useful for sampler initial states.
Mat standard_normal_matrix(Index dim, Index n, std::uint64_t seed, std::string_view tag);

/// Deterministic probability-flow integration: z += dt * v(z, t).
Mat euler_sample(const VelocityField& field, const TimeGrid& grid, Mat z,
                 Trajectory* trajectory = nullptr);

/// SDE integration with score feedback:
///   dZ = [v + sigma_t * score] dt + sqrt(2 sigma_t dt) xi.
/// The score comes from the velocity via the Tweedie conversion. Steps where
/// sigma_t == 0 reduce to the Euler update, bit for bit.
Mat langevin_sample(const VelocityField& field, const TimeGrid& grid, Mat z,
                    const SigmaSchedule& sigma, std::uint64_t seed,
                    const TweedieOptions& tweedie = {}, Trajectory* trajectory = nullptr);

/// Fraction of the start-point estimate replaced by fresh noise when
/// stepping from t to t_next.
double curved_euler_noise_fraction(double t, double t_next);

/// Stochastic sampler that re-interpolates between the predicted endpoint
/// and a partially renoised start-point estimate each step.
Mat curved_euler_sample(const VelocityField& field, const TimeGrid& grid, Mat z,
                        std::uint64_t seed, Trajectory* trajectory = nullptr);

struct OvershootCoeffs {
  double o;  // overshot time, capped at 1
  double a;  // contraction back to t_next
  double b;  // fresh-noise scale
};

/// Coefficients for one overshoot step from t to t_next with strength c.
/// The noise variance (1 - t_next)^2 - (a (1 - o))^2 is nonnegative up to
/// rounding; values above -1e-15 are clamped to zero, anything lower throws.
OvershootCoeffs overshoot_coeffs(double c, double t, double t_next);

/// Stochastic sampler that integrates past each grid time and contracts
/// back with matched noise. c == 0 reduces to Euler, bit for bit.
Mat overshoot_sample(const VelocityField& field, const TimeGrid& grid, Mat z, double c,
                     std::uint64_t seed, Trajectory* trajectory = nullptr);

}  // namespace brf
