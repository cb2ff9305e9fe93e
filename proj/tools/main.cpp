#include <cstdint>
#include <iostream>
#include <string>

#if defined(__GLIBC__)
#include <malloc.h>
#endif

#include <CLI11.hpp>

#include "boundary_rf/checkpoint.hpp"
#include "boundary_rf/common.hpp"
#include "experiment.hpp"
#include "oracle_checks.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitDivergence = 3;
constexpr int kExitCheckFailed = 4;

struct CommonArgs {
  std::string config_path;
  std::string out_dir = "out";
  std::string checkpoint;
  std::uint64_t seed = 0;
  bool seed_set = false;
  int workers = 1;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool config_required, bool checkpoint_required) {
  auto* config = cmd->add_option("--config", args.config_path, "Experiment config (JSON)");
  if (config_required) config->required();
  cmd->add_option("--out", args.out_dir, "Output directory")->capture_default_str();
  cmd->add_option("--seed", args.seed, "Override the config seed")
      ->each([&args](const std::string&) { args.seed_set = true; });
  auto* ckpt = cmd->add_option("--checkpoint", args.checkpoint, "Model checkpoint to load");
  if (checkpoint_required) ckpt->required();
  cmd->add_option("--workers", args.workers, "Concurrent sweep children")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
}

brf::ExperimentConfig load(const CommonArgs& args) {
  brf::ExperimentConfig config = brf::load_config(args.config_path);
  if (args.seed_set) brf::override_seed(config, args.seed);
  return config;
}

void print_run_summary(const brf::RunResult& result) {
  std::cout << "out: " << result.out_dir.string() << "\n";
  std::cout << "config_digest: " << result.config_digest << "\n";
  if (std::isfinite(result.final_loss)) std::cout << "final_loss: " << result.final_loss << "\n";
  if (!result.samplers.empty() || result.boundary.t1_max != 0.0 || result.boundary.t0_max != 0.0) {
    std::cout << "boundary_violation_t1_max: " << result.boundary.t1_max << "\n";
    std::cout << "boundary_violation_t0_max: " << result.boundary.t0_max << "\n";
  }
  for (const brf::SamplerReport& rep : result.samplers) {
    std::cout << "sampler " << rep.label << ": energy_distance " << rep.energy_distance
              << ", cov_trace_ratio " << rep.cov_trace_ratio << "\n";
  }
}

int run_pipeline(const CommonArgs& args, const brf::RunOptions& options) {
  const brf::ExperimentConfig config = load(args);
  const brf::RunResult result = brf::run_experiment(config, args.out_dir, options);
  print_run_summary(result);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
#if defined(__GLIBC__)
  // Training allocates many ~256 KiB temporaries per step; keep them in the
  // malloc arena instead of round-tripping each one through mmap/munmap.
  mallopt(M_MMAP_THRESHOLD, 128 << 20);
  mallopt(M_TRIM_THRESHOLD, 128 << 20);
#endif
  CLI::App app{"Rectified-flow training and sampling with boundary-enforced velocity models"};
  app.require_subcommand(1);

  CommonArgs run_args, train_args, sample_args, eval_args, sweep_args, oracle_args;

  CLI::App* cmd_run = app.add_subcommand("run", "Train, sample, and evaluate in one pass");
  add_common(cmd_run, run_args, true, false);

  CLI::App* cmd_train = app.add_subcommand("train", "Train a model and write a checkpoint");
  add_common(cmd_train, train_args, true, false);

  CLI::App* cmd_sample = app.add_subcommand("sample", "Draw samples from a checkpoint");
  add_common(cmd_sample, sample_args, true, true);

  CLI::App* cmd_eval = app.add_subcommand("eval", "Sample from a checkpoint and compute metrics");
  add_common(cmd_eval, eval_args, true, true);

  CLI::App* cmd_sweep = app.add_subcommand("sweep", "Run the sweep axes of a config");
  add_common(cmd_sweep, sweep_args, true, false);

  CLI::App* cmd_oracle =
      app.add_subcommand("oracle-check", "Validate samplers and conversions against a "
                                         "closed-form Gaussian target");
  oracle_args.seed = 7;
  cmd_oracle->add_option("--seed", oracle_args.seed, "Probe seed")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (cmd_run->parsed()) {
      brf::RunOptions options;
      options.checkpoint = run_args.checkpoint;
      return run_pipeline(run_args, options);
    }
    if (cmd_train->parsed()) {
      brf::RunOptions options;
      options.do_sample = false;
      options.do_eval = false;
      return run_pipeline(train_args, options);
    }
    if (cmd_sample->parsed()) {
      brf::RunOptions options;
      options.do_train = false;
      options.do_eval = false;
      options.checkpoint = sample_args.checkpoint;
      return run_pipeline(sample_args, options);
    }
    if (cmd_eval->parsed()) {
      brf::RunOptions options;
      options.do_train = false;
      options.checkpoint = eval_args.checkpoint;
      return run_pipeline(eval_args, options);
    }
    if (cmd_sweep->parsed()) {
      const brf::ExperimentConfig config = load(sweep_args);
      const brf::SweepResult sweep =
          brf::run_sweep(config, sweep_args.out_dir, sweep_args.workers, false);
      std::cout << "summary: " << sweep.summary_csv.string() << "\n";
      for (const brf::SweepChild& child : sweep.children)
        std::cout << child.label << ": " << child.status << "\n";
      if (sweep.all_ok) return kExitOk;
      return sweep.any_divergence ? kExitDivergence : kExitConfig;
    }
    if (cmd_oracle->parsed()) {
      const auto results = brf::run_oracle_checks(oracle_args.seed);
      for (const brf::CheckResult& r : results)
        std::cout << (r.passed ? "PASS " : "FAIL ") << r.name << ": " << r.detail << "\n";
      return brf::all_passed(results) ? kExitOk : kExitCheckFailed;
    }
  } catch (const brf::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const brf::CheckpointError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const brf::DivergenceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDivergence;
  } catch (const brf::SingularTimeError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDivergence;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return kExitOk;
}
