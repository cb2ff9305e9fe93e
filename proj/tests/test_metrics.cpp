#include <doctest.h>

#include <cmath>

#include "boundary_rf/metrics.hpp"
#include "boundary_rf/rng.hpp"
#include "boundary_rf/samplers.hpp"
#include "boundary_rf/velocity.hpp"

using namespace brf;

namespace {

MlpArch arch2d() {
  MlpArch arch;
  arch.data_dim = 2;
  arch.hidden = {16};
  arch.time_frequencies = 4;
  return arch;
}

}  // namespace

TEST_CASE("boundary violation is zero for a pinned field and not for a bare one") {
  Vec data_mean(2);
  data_mean << 1.0, -0.5;
  const Mat probes = standard_normal_matrix(2, 32, 4, "probes");

  const MaskBoundaryVelocity pinned(arch2d(), 2, BoundaryFunctionSet::named("standard_cosine"),
                                    data_mean);
  const BoundaryReport clean = boundary_violation(pinned, probes, data_mean);
  CHECK(clean.t1_max == 0.0);
  CHECK(clean.t1_mean == 0.0);
  CHECK(clean.t0_max == 0.0);
  CHECK(clean.t0_mean == 0.0);

  const VanillaVelocity bare(arch2d(), 2);
  const BoundaryReport dirty = boundary_violation(bare, probes, data_mean);
  CHECK(dirty.t1_max > 0.1);
  CHECK(dirty.t0_max > 0.1);
  CHECK(dirty.t1_mean > 0.0);
  CHECK(dirty.t1_max >= dirty.t1_mean);

  // The subtraction parameterization pins t = 1 only.
  const SubtractionBoundaryVelocity half_pinned(arch2d(), 2);
  const BoundaryReport half = boundary_violation(half_pinned, probes, data_mean);
  CHECK(half.t1_max == 0.0);
  CHECK(half.t0_max > 0.0);
}

TEST_CASE("boundary violation reports the worst probe") {
  // Hand-checkable field: v(x, t) = x + (1, 0) everywhere, so the t = 1 gap
  // is exactly 1 for every probe and t = 0 gap is |2x - C + (1,0)|.
  struct Shifted final : VelocityField {
    Index dim() const override { return 2; }
    Mat eval_batch(const Mat& xs, double) const override {
      Mat out = xs;
      out.row(0).array() += 1.0;
      return out;
    }
  } field;

  Mat probes = Mat::Zero(2, 2);
  probes(0, 1) = 2.0;  // second probe sits at (2, 0)
  const Vec data_mean = Vec::Zero(2);
  const BoundaryReport rep = boundary_violation(field, probes, data_mean);
  CHECK(rep.t1_max == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(rep.t1_mean == doctest::Approx(1.0).epsilon(1e-14));
  // t = 0 target is -x, field gives x + (1,0): gaps are 1 and 5.
  CHECK(rep.t0_max == doctest::Approx(5.0).epsilon(1e-14));
  CHECK(rep.t0_mean == doctest::Approx(3.0).epsilon(1e-14));
}

TEST_CASE("score norm profile clamps late times") {
  Vec m(2), v(2);
  m << 0.0, 0.0;
  v << 1.0, 1.0;
  const GaussianOracleVelocity field(GaussianSpec(m, v));
  const Mat probes = standard_normal_matrix(2, 16, 9, "probes");

  const auto times = default_profile_times();
  REQUIRE(times.size() == 4);
  CHECK(times[3] == 0.999);

  const ScoreNormProfile profile = score_norm_profile(field, probes, {0.5, 0.9999, 1.0});
  REQUIRE(profile.requested_times.size() == 3);
  CHECK(profile.effective_times[0] == 0.5);
  CHECK(profile.effective_times[1] == 1.0 - 1e-3);
  CHECK(profile.effective_times[2] == 1.0 - 1e-3);
  CHECK(profile.requested_times[1] == 0.9999);

  // Unit-variance target: score is -x / ((1-t)^2 + t^2) at time t.
  const double base = probes.colwise().norm().mean();
  for (std::size_t k = 0; k < profile.mean_norm.size(); ++k) {
    const double e = profile.effective_times[k];
    const double want = base / ((1 - e) * (1 - e) + e * e);
    CHECK(profile.mean_norm[k] == doctest::Approx(want).epsilon(1e-9));
  }
}

TEST_CASE("energy distance on a hand-computed example") {
  // a = {0, 2}, b = {1, 3} in 1D:
  //   cross pairs |a_i - b_j|: 1, 3, 1, 1 -> mean 1.5
  //   within a: |0 - 2| = 2; within b: |1 - 3| = 2
  //   ED = 2 * 1.5 - 2 - 2 = -1.
  Mat a(1, 2), b(1, 2);
  a << 0.0, 2.0;
  b << 1.0, 3.0;
  CHECK(energy_distance(a, b) == doctest::Approx(-1.0).epsilon(1e-14));

  CHECK(energy_distance(a, a) == doctest::Approx(-2.0).epsilon(1e-14));

  Mat c(1, 3);
  c << 0.0, 0.0, 0.0;
  Mat d(1, 2);
  d << 0.0, 0.0;
  CHECK(energy_distance(c, d) == 0.0);
}

TEST_CASE("energy distance separates distributions and vanishes in distribution") {
  const Mat same_a = standard_normal_matrix(2, 400, 11, "a");
  const Mat same_b = standard_normal_matrix(2, 400, 11, "b");
  const double near_zero = energy_distance(same_a, same_b);
  // Unbiased statistic: small and allowed to dip below zero.
  CHECK(std::abs(near_zero) < 0.05);

  Mat shifted = same_b;
  shifted.row(0).array() += 3.0;
  CHECK(energy_distance(same_a, shifted) > 1.0);

  CHECK_THROWS_AS(energy_distance(same_a, Mat::Zero(3, 10)), std::invalid_argument);
  CHECK_THROWS_AS(energy_distance(Mat::Zero(2, 1), same_b), std::invalid_argument);
}

TEST_CASE("moment summary uses unbiased variances") {
  Mat samples(2, 3);
  samples << 1.0, 2.0, 3.0,
             0.0, 0.0, 6.0;
  const MomentSummary mom = moment_summary(samples);
  CHECK(mom.mean(0) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(mom.mean(1) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(mom.stddev(0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(mom.stddev(1) == doctest::Approx(std::sqrt(12.0)).epsilon(1e-14));
  CHECK(mom.cov_trace == doctest::Approx(13.0).epsilon(1e-14));

  CHECK_THROWS_AS(moment_summary(Mat::Zero(2, 1)), std::invalid_argument);
}

TEST_CASE("compensated sums survive catastrophic cancellation") {
  CompensatedSum sum;
  sum.add(1e16);
  sum.add(1.0);
  sum.add(-1e16);
  CHECK(sum.value() == 1.0);

  // Plain double accumulation loses the small term entirely.
  double naive = 1e16;
  naive += 1.0;
  naive -= 1e16;
  CHECK(naive == 0.0);
}
