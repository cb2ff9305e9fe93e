#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "boundary_rf/distributions.hpp"
#include "boundary_rf/metrics.hpp"
#include "boundary_rf/mlp.hpp"
#include "boundary_rf/samplers.hpp"
#include "boundary_rf/training.hpp"

namespace brf {

/// Anything wrong with a config file: unreadable, malformed JSON, unknown
/// keys, missing keys, out-of-range values.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct DataConfig {
  std::string kind;  // "diagonal_gaussian" | "gaussian_mixture"
  // diagonal_gaussian
  std::vector<double> mean;
  std::vector<double> var;
  // gaussian_mixture
  struct MixtureComponent {
    std::vector<double> mean;
    double stddev = 1.0;
    double weight = 1.0;
  };
  std::vector<MixtureComponent> components;

  Index dim() const;
  std::shared_ptr<const DataDistribution> make() const;
};

struct ModelConfig {
  std::string kind = "mask";  // "vanilla" | "mask" | "subtraction"
  std::string boundary_set = "standard_cosine";
  std::string data_mean_mode = "empirical";  // "empirical" | "zero"
  Index data_mean_samples = 4096;
  std::vector<Index> hidden = {128, 128, 128};
  int time_frequencies = 8;
  std::string activation = "silu";

  MlpArch arch(Index data_dim) const;
};

struct TimeSamplerConfig {
  std::string kind = "uniform";  // "uniform" | "logit_normal"
  double logit_mean = 0.0;
  double logit_std = 1.0;

  TimeSampler make() const;
};

struct TrainingSection {
  Index steps = 2000;
  Index batch_size = 256;
  double learning_rate = 1e-3;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_epsilon = 1e-8;
  TimeSamplerConfig time_sampler;
  double loss_weight_scale = 1.0;
  Index log_every = 100;

  TrainConfig make() const;
};

struct SamplerConfig {
  std::string kind;  // "euler" | "langevin" | "curved_euler" | "overshoot"
  std::string sigma_kind = "triangular";  // langevin
  double sigma0 = 0.5;                    // langevin
  double overshoot_c = 1.0;               // overshoot

  std::string label() const;  // unique name used in file names and reports
  SigmaSchedule sigma() const;
};

struct EvalSection {
  Index reference_samples = 4096;
  Index energy_samples = 2048;
  Index boundary_probes = 256;
  std::vector<double> score_profile_times = default_profile_times();
  GridSpec grid;
  double score_grid_time = 0.9;
};

struct SamplingSection {
  Index n_samples = 4096;
  Index n_steps = 100;
  std::vector<SamplerConfig> samplers;
};

/// One sweep axis per field; the sweep is the cross product of whatever is
/// non-empty, applied on top of the base config.
struct SweepSection {
  std::vector<std::string> boundary_set;
  std::vector<double> overshoot_c;
  std::vector<Index> n_steps;

  bool empty() const { return boundary_set.empty() && overshoot_c.empty() && n_steps.empty(); }
};

struct ExperimentConfig {
  std::string name;
  std::uint64_t seed = 0;
  DataConfig data;
  ModelConfig model;
  TrainingSection training;
  SamplingSection sampling;
  EvalSection eval;
  SweepSection sweep;

  nlohmann::json canonical;  // normalized form the digest is taken over
  std::string digest;        // 16 hex chars
};

/// Strict parse: every key must be known, every value well typed and in
/// range. Errors carry the JSON path of the offending key.
ExperimentConfig parse_config(const nlohmann::json& root);

ExperimentConfig load_config(const std::filesystem::path& path);

/// Replace the master seed (CLI --seed) and refresh canonical form + digest.
void override_seed(ExperimentConfig& config, std::uint64_t seed);

/// Expanded sweep point: overrides applied to the base config.
struct SweepPoint {
  Index index = 0;
  std::string label;
  ExperimentConfig config;  // sweep section cleared
};

std::vector<SweepPoint> expand_sweep(const ExperimentConfig& base);

}  // namespace brf
