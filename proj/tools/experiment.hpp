#pragma once

#include <filesystem>
#include <limits>
#include <string>
#include <vector>

#include "boundary_rf/metrics.hpp"
#include "config.hpp"

namespace brf {

struct RunOptions {
  bool do_train = true;
  bool do_sample = true;
  bool do_eval = true;
  std::filesystem::path checkpoint;  // when set, load this instead of init + train
  bool quiet = false;
};

struct SamplerReport {
  std::string label;
  MomentSummary moments;
  double energy_distance = 0.0;
  double cov_trace_ratio = 0.0;  // sampled trace over analytic trace
};

struct RunResult {
  std::filesystem::path out_dir;
  std::string config_digest;
  double final_loss = std::numeric_limits<double>::quiet_NaN();
  BoundaryReport boundary;
  ScoreNormProfile score_profile;
  std::vector<SamplerReport> samplers;
  std::vector<std::string> files;  // written outputs, relative to out_dir
};

/// Deterministic pipeline: resolve stage seeds from the master seed, build
/// the data distribution and model, then train, sample, and evaluate as
/// requested. Every output lands in out_dir; manifest.json is written last
/// so its presence marks a complete run.
RunResult run_experiment(const ExperimentConfig& config, const std::filesystem::path& out_dir,
                         const RunOptions& options = {});

struct SweepChild {
  Index index = 0;
  std::string label;
  std::string status;  // "ok", "config_error", "divergence", "error"
  std::string message;
  ExperimentConfig config;
  RunResult result;  // valid when status == "ok"
};

struct SweepResult {
  std::vector<SweepChild> children;
  std::filesystem::path summary_csv;
  bool all_ok = true;
  bool any_divergence = false;
};

/// Expand the sweep axes, run every child (failures do not stop the rest),
/// and write one summary.csv over all children. workers > 1 runs children
/// concurrently; outputs are identical either way.
SweepResult run_sweep(const ExperimentConfig& base, const std::filesystem::path& out_dir,
                      int workers, bool quiet);

}  // namespace brf
