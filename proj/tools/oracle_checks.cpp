#include "oracle_checks.hpp"

#include <cmath>
#include <cstdio>
#include <string>

#include "boundary_rf/metrics.hpp"
#include "boundary_rf/samplers.hpp"
#include "boundary_rf/score.hpp"
#include "boundary_rf/velocity.hpp"

namespace brf {

namespace {

std::string fm(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3g", x);
  return buf;
}

GaussianSpec spec_3d() {
  Vec mean(3), var(3);
  mean << 1.0, -0.5, 2.0;
  var << 4.0, 0.25, 1.0;
  return {mean, var};
}

GaussianSpec spec_1d() {
  Vec mean(1), var(1);
  mean << 1.0;
  var << 4.0;
  return {mean, var};
}

CheckResult check_oracle_boundary(std::uint64_t seed) {
  const GaussianSpec target = spec_3d();
  const Mat xs = 3.0 * standard_normal_matrix(3, 100, seed, "oracle.boundary.probe");
  const Mat at_one = gaussian_oracle_velocity(xs, 1.0, target);
  const Mat at_zero = gaussian_oracle_velocity(xs, 0.0, target);
  const Mat ref_zero = (-xs).colwise() + target.mean;
  const double gap1 = (at_one - xs).cwiseAbs().maxCoeff();
  const double gap0 = (at_zero - ref_zero).cwiseAbs().maxCoeff();
  const double tol = 1e-12;
  return {"oracle_boundary_identity", gap1 <= tol && gap0 <= tol,
          "max|v(x,1)-x| = " + fm(gap1) + ", max|v(x,0)-(C-x)| = " + fm(gap0) + " (tol " +
              fm(tol) + ")"};
}

CheckResult check_tweedie_identity(std::uint64_t seed) {
  const GaussianSpec target = spec_3d();
  const GaussianOracleVelocity field(target);
  const Mat xs = 3.0 * standard_normal_matrix(3, 100, seed, "oracle.tweedie.probe");
  double worst = 0.0;
  for (int i = 0; i <= 30; ++i) {
    const double t = 0.05 + (0.95 - 0.05) * static_cast<double>(i) / 30.0;
    const Mat converted = tweedie_score_batch(field, xs, t).values;
    const Mat exact = gaussian_oracle_score(xs, t, target);
    worst = std::max(worst, (converted - exact).cwiseAbs().maxCoeff());
  }
  const double tol = 1e-10;
  return {"tweedie_identity", worst <= tol,
          "max|(t v - x)/(1-t) - score| = " + fm(worst) + " over t in [0.05, 0.95] (tol " +
              fm(tol) + ")"};
}

std::string stats_detail(const MomentSummary& m, double mean_tol, double std_tol) {
  return "mean = " + fm(m.mean(0)) + " (target 1 +- " + fm(mean_tol) + "), std = " +
         fm(m.stddev(0)) + " (target 2 +- " + fm(std_tol) + ")";
}

bool stats_ok(const MomentSummary& m, double mean_tol, double std_tol) {
  return std::abs(m.mean(0) - 1.0) <= mean_tol && std::abs(m.stddev(0) - 2.0) <= std_tol;
}

CheckResult check_euler_stats(std::uint64_t seed) {
  const GaussianOracleVelocity field(spec_1d());
  const TimeGrid grid = make_time_grid(500);
  const Mat z0 = standard_normal_matrix(1, 50000, seed, "oracle.euler.init");
  const MomentSummary m = moment_summary(euler_sample(field, grid, z0));
  return {"euler_oracle_stats", stats_ok(m, 0.02, 0.04), stats_detail(m, 0.02, 0.04)};
}

CheckResult check_stochastic_stats(std::uint64_t seed) {
  const GaussianOracleVelocity field(spec_1d());
  const TimeGrid grid = make_time_grid(500);
  const Mat z0 = standard_normal_matrix(1, 50000, seed, "oracle.stochastic.init");
  const MomentSummary curved = moment_summary(curved_euler_sample(field, grid, z0, seed));
  const MomentSummary langevin = moment_summary(
      langevin_sample(field, grid, z0, SigmaSchedule::triangular(0.5), seed));
  const MomentSummary overshoot = moment_summary(overshoot_sample(field, grid, z0, 1.0, seed));
  const bool ok = stats_ok(curved, 0.05, 0.08) && stats_ok(langevin, 0.05, 0.08) &&
                  stats_ok(overshoot, 0.05, 0.08);
  return {"stochastic_oracle_stats", ok,
          "curved: " + stats_detail(curved, 0.05, 0.08) + "; langevin: " +
              stats_detail(langevin, 0.05, 0.08) + "; overshoot: " +
              stats_detail(overshoot, 0.05, 0.08)};
}

CheckResult check_degeneracies(std::uint64_t seed) {
  const GaussianOracleVelocity field(spec_1d());
  const TimeGrid grid = make_time_grid(10);
  const Mat z0 = standard_normal_matrix(1, 64, seed, "oracle.degenerate.init");
  const Mat euler = euler_sample(field, grid, z0);
  const Mat langevin0 = langevin_sample(field, grid, z0, SigmaSchedule::constant(0.0), seed);
  const Mat overshoot0 = overshoot_sample(field, grid, z0, 0.0, seed);
  const bool lv = (langevin0.array() == euler.array()).all();
  const bool ov = (overshoot0.array() == euler.array()).all();
  return {"degeneracy_bitwise", lv && ov,
          std::string("sigma=0 langevin ") + (lv ? "==" : "!=") + " euler, c=0 overshoot " +
              (ov ? "==" : "!=") + " euler (bitwise)"};
}

CheckResult check_curved_overshoot_agreement(std::uint64_t seed) {
  const GaussianOracleVelocity field(spec_1d());
  const TimeGrid grid = make_time_grid(1000);
  const Mat z0 = standard_normal_matrix(1, 50000, seed, "oracle.agree.init");
  const MomentSummary a = moment_summary(curved_euler_sample(field, grid, z0, seed));
  const MomentSummary b = moment_summary(overshoot_sample(field, grid, z0, 1.0, seed));
  const double dmean = std::abs(a.mean(0) - b.mean(0));
  const double dstd = std::abs(a.stddev(0) - b.stddev(0));
  return {"curved_overshoot_agreement", dmean <= 0.03 && dstd <= 0.05,
          "|mean gap| = " + fm(dmean) + " (tol 0.03), |std gap| = " + fm(dstd) + " (tol 0.05)"};
}

}  // namespace

std::vector<CheckResult> run_oracle_checks(std::uint64_t seed) {
  return {check_oracle_boundary(seed),  check_tweedie_identity(seed),
          check_euler_stats(seed),      check_stochastic_stats(seed),
          check_degeneracies(seed),     check_curved_overshoot_agreement(seed)};
}

bool all_passed(const std::vector<CheckResult>& results) {
  for (const CheckResult& r : results)
    if (!r.passed) return false;
  return true;
}

}  // namespace brf
