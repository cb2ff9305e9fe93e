#include "boundary_rf/metrics.hpp"

#include <algorithm>
#include <cmath>

namespace brf {

BoundaryReport boundary_violation(const VelocityField& field, const Mat& probes,
                                  const Vec& data_mean) {
  require(probes.cols() > 0, "boundary_violation: empty probe set");
  require(data_mean.size() == field.dim(), "boundary_violation: data mean dimension mismatch");
  BoundaryReport report;
  const Mat at_one = field.eval_batch(probes, 1.0);
  const Mat at_zero = field.eval_batch(probes, 0.0);
  CompensatedSum sum_t1, sum_t0;
  for (Index j = 0; j < probes.cols(); ++j) {
    const double gap1 = (at_one.col(j) - probes.col(j)).norm();
    const double gap0 = (at_zero.col(j) - (data_mean - probes.col(j))).norm();
    report.t1_max = std::max(report.t1_max, gap1);
    report.t0_max = std::max(report.t0_max, gap0);
    sum_t1.add(gap1);
    sum_t0.add(gap0);
  }
  const double n = static_cast<double>(probes.cols());
  report.t1_mean = sum_t1.value() / n;
  report.t0_mean = sum_t0.value() / n;
  return report;
}

std::vector<double> default_profile_times() { return {0.5, 0.9, 0.98, 0.999}; }

ScoreNormProfile score_norm_profile(const VelocityField& field, const Mat& probes,
                                    const std::vector<double>& times,
                                    const TweedieOptions& opts) {
  require(probes.cols() > 0, "score_norm_profile: empty probe set");
  require(!times.empty(), "score_norm_profile: no times requested");
  constexpr double kLatestTime = 1.0 - 1e-3;
  ScoreNormProfile profile;
  for (const double t : times) {
    require(t >= 0.0 && t <= 1.0, "score_norm_profile: times must lie in [0, 1]");
    const double eff = std::min(t, kLatestTime);
    const ScoreEstimate est = tweedie_score_batch(field, probes, eff, opts);
    CompensatedSum acc;
    for (Index j = 0; j < est.values.cols(); ++j) acc.add(est.values.col(j).norm());
    profile.requested_times.push_back(t);
    profile.effective_times.push_back(est.effective_t);
    profile.mean_norm.push_back(acc.value() / static_cast<double>(probes.cols()));
  }
  return profile;
}

double energy_distance(const Mat& a, const Mat& b) {
  require(a.rows() == b.rows(), "energy_distance: dimension mismatch");
  const Index na = a.cols();
  const Index nb = b.cols();
  require(na >= 2 && nb >= 2, "energy_distance: need at least two samples per set");
  CompensatedSum cross, within_a, within_b;
  for (Index i = 0; i < na; ++i)
    for (Index j = 0; j < nb; ++j) cross.add((a.col(i) - b.col(j)).norm());
  for (Index i = 0; i < na; ++i)
    for (Index j = i + 1; j < na; ++j) within_a.add((a.col(i) - a.col(j)).norm());
  for (Index i = 0; i < nb; ++i)
    for (Index j = i + 1; j < nb; ++j) within_b.add((b.col(i) - b.col(j)).norm());
  const double fa = static_cast<double>(na);
  const double fb = static_cast<double>(nb);
  return 2.0 * cross.value() / (fa * fb) - 2.0 * within_a.value() / (fa * (fa - 1.0)) -
         2.0 * within_b.value() / (fb * (fb - 1.0));
}

MomentSummary moment_summary(const Mat& samples) {
  const Index d = samples.rows();
  const Index n = samples.cols();
  require(n >= 2, "moment_summary: need at least two samples");
  MomentSummary out;
  out.mean.resize(d);
  out.stddev.resize(d);
  for (Index r = 0; r < d; ++r) {
    CompensatedSum acc;
    for (Index j = 0; j < n; ++j) acc.add(samples(r, j));
    out.mean(r) = acc.value() / static_cast<double>(n);
  }
  CompensatedSum trace;
  for (Index r = 0; r < d; ++r) {
    CompensatedSum sq;
    for (Index j = 0; j < n; ++j) {
      const double dev = samples(r, j) - out.mean(r);
      sq.add(dev * dev);
    }
    const double var = sq.value() / static_cast<double>(n - 1);
    out.stddev(r) = std::sqrt(var);
    trace.add(var);
  }
  out.cov_trace = trace.value();
  return out;
}

}  // namespace brf
