#include <doctest.h>

#include <cmath>

#include "boundary_rf/rng.hpp"
#include "boundary_rf/score.hpp"
#include "boundary_rf/velocity.hpp"

using namespace brf;

namespace {

GaussianSpec spec_2d() {
  Vec m(2), v(2);
  m << 1.0, -0.5;
  v << 4.0, 0.25;
  return GaussianSpec(m, v);
}

// Log-density of the interpolation marginal at time t (diagonal Gaussian
// with mean t*mu and variance (1-t)^2 + t^2 var), up to the constant.
double marginal_log_density(const Vec& x, double t, const GaussianSpec& spec) {
  double acc = 0.0;
  for (Index i = 0; i < x.size(); ++i) {
    const double var_t = (1 - t) * (1 - t) + t * t * spec.var(i);
    const double c = x(i) - t * spec.mean(i);
    acc += -0.5 * c * c / var_t - 0.5 * std::log(var_t);
  }
  return acc;
}

}  // namespace

TEST_CASE("velocity-to-score conversion recovers the closed-form score") {
  const GaussianOracleVelocity field(spec_2d());
  RngStream rng(12, "test.points", 0);
  const Mat xs = Mat::NullaryExpr(2, 20, [&](Index, Index) { return 2.0 * rng.normal(); });

  for (double t : {0.05, 0.3, 0.5, 0.7, 0.95}) {
    CAPTURE(t);
    const ScoreEstimate est = tweedie_score_batch(field, xs, t);
    CHECK_FALSE(est.clamped);
    CHECK(est.effective_t == t);
    const Mat want = gaussian_oracle_score(xs, t, field.target());
    CHECK((est.values - want).lpNorm<Eigen::Infinity>() < 1e-10);
  }
}

TEST_CASE("score matches finite differences of the marginal log density") {
  const GaussianSpec spec = spec_2d();
  const GaussianOracleVelocity field(spec);
  Vec x(2);
  x << 0.8, -0.2;
  const double t = 0.6, eps = 1e-6;

  const Vec score = tweedie_score(field, x, t);
  for (Index i = 0; i < 2; ++i) {
    Vec hi = x, lo = x;
    hi(i) += eps;
    lo(i) -= eps;
    const double fd = (marginal_log_density(hi, t, spec) - marginal_log_density(lo, t, spec)) /
                      (2 * eps);
    CHECK(score(i) == doctest::Approx(fd).epsilon(1e-6));
  }
}

TEST_CASE("times inside the singular window raise or clamp") {
  const GaussianOracleVelocity field(spec_2d());
  const Mat xs = Mat::Zero(2, 3);

  CHECK_THROWS_AS(tweedie_score_batch(field, xs, 1.0), SingularTimeError);
  CHECK_THROWS_AS(tweedie_score_batch(field, xs, 1.0 - 1e-7), SingularTimeError);
  CHECK_NOTHROW(tweedie_score_batch(field, xs, 1.0 - 1e-5));

  TweedieOptions clamp;
  clamp.clamp_near_one = true;
  const ScoreEstimate est = tweedie_score_batch(field, xs, 1.0, clamp);
  CHECK(est.clamped);
  CHECK(est.effective_t == 1.0 - clamp.singular_delta);
  const Mat want = gaussian_oracle_score(xs, est.effective_t, field.target());
  CHECK((est.values - want).lpNorm<Eigen::Infinity>() < 1e-6);

  // A wider window moves the threshold with it.
  TweedieOptions wide;
  wide.singular_delta = 0.1;
  CHECK_THROWS_AS(tweedie_score_batch(field, xs, 0.95, wide), SingularTimeError);
  CHECK_NOTHROW(tweedie_score_batch(field, xs, 0.85, wide));
}

TEST_CASE("score at t = 0 is the standard-normal score") {
  const GaussianOracleVelocity field(spec_2d());
  RngStream rng(13, "test.points", 0);
  const Mat xs = Mat::NullaryExpr(2, 6, [&](Index, Index) { return rng.normal(); });
  const ScoreEstimate est = tweedie_score_batch(field, xs, 0.0);
  CHECK((est.values + xs).lpNorm<Eigen::Infinity>() < 1e-14);
}

TEST_CASE("grid layout puts x fastest") {
  const GaussianOracleVelocity field(spec_2d());
  GridSpec spec;
  spec.x_min = -1.0;
  spec.x_max = 1.0;
  spec.y_min = 0.0;
  spec.y_max = 2.0;
  spec.nx = 3;
  spec.ny = 2;

  const GridField grid = velocity_field_on_grid(field, spec, 0.5);
  REQUIRE(grid.points.cols() == 6);
  REQUIRE(grid.values.cols() == 6);
  // Row 0: x sweeps -1, 0, 1 then repeats; row 1: y held then stepped.
  CHECK(grid.points(0, 0) == -1.0);
  CHECK(grid.points(0, 1) == 0.0);
  CHECK(grid.points(0, 2) == 1.0);
  CHECK(grid.points(1, 0) == 0.0);
  CHECK(grid.points(1, 3) == 2.0);
  CHECK(grid.points(0, 4) == 0.0);

  const Mat want = field.eval_batch(grid.points, 0.5);
  CHECK(grid.values == want);
}

TEST_CASE("grid score equals pointwise conversion") {
  const GaussianOracleVelocity field(spec_2d());
  GridSpec spec;
  spec.nx = 4;
  spec.ny = 4;
  const GridField grid = score_field_on_grid(field, spec, 0.7);
  CHECK_FALSE(grid.clamped);
  const ScoreEstimate direct = tweedie_score_batch(field, grid.points, 0.7);
  CHECK(grid.values == direct.values);

  // Clamping propagates through the grid variant too.
  TweedieOptions clamp;
  clamp.clamp_near_one = true;
  const GridField near_one = score_field_on_grid(field, spec, 0.9999999, clamp);
  CHECK(near_one.clamped);
  CHECK(near_one.effective_t == 1.0 - clamp.singular_delta);
}

TEST_CASE("grid rejects non-planar fields and bad specs") {
  Vec m(3), v(3);
  m << 0, 0, 0;
  v << 1, 1, 1;
  const GaussianOracleVelocity field3(GaussianSpec(m, v));
  CHECK_THROWS_AS(velocity_field_on_grid(field3, GridSpec{}, 0.5), std::invalid_argument);

  const GaussianOracleVelocity field(spec_2d());
  GridSpec bad;
  bad.nx = 1;
  CHECK_THROWS_AS(velocity_field_on_grid(field, bad, 0.5), std::invalid_argument);
  GridSpec inverted;
  inverted.x_min = 2.0;
  inverted.x_max = -2.0;
  CHECK_THROWS_AS(velocity_field_on_grid(field, inverted, 0.5), std::invalid_argument);
}
