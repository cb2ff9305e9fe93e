#pragma once

#include <vector>

#include "boundary_rf/common.hpp"
#include "boundary_rf/score.hpp"
#include "boundary_rf/velocity.hpp"

namespace brf {

/// L2 gap between the field and its pinned endpoint values over a probe set:
/// at t = 1 against x, at t = 0 against data_mean - x.
struct BoundaryReport {
  double t1_max = 0.0;
  double t1_mean = 0.0;
  double t0_max = 0.0;
  double t0_mean = 0.0;
};

BoundaryReport boundary_violation(const VelocityField& field, const Mat& probes,
                                  const Vec& data_mean);

/// Mean score magnitude over probes at a handful of late times. Requested
/// times above 1 - 1e-3 are evaluated at 1 - 1e-3 (recorded per entry), which
/// keeps the conversion well away from its t = 1 singularity.
struct ScoreNormProfile {
  std::vector<double> requested_times;
  std::vector<double> effective_times;
  std::vector<double> mean_norm;
};

std::vector<double> default_profile_times();  // {0.5, 0.9, 0.98, 0.999}

ScoreNormProfile score_norm_profile(const VelocityField& field, const Mat& probes,
                                    const std::vector<double>& times,
                                    const TweedieOptions& opts = {});

/// Unbiased two-sample energy distance
///   2 E||A - B|| - E||A - A'|| - E||B - B'||
/// with within-set terms over distinct pairs only. Exact all-pairs sums,
/// O(n^2); keep the sample counts modest.
double energy_distance(const Mat& a, const Mat& b);

struct MomentSummary {
  Vec mean;
  Vec stddev;        // unbiased, per coordinate
  double cov_trace;  // sum of the unbiased per-coordinate variances
};

MomentSummary moment_summary(const Mat& samples);

}  // namespace brf
