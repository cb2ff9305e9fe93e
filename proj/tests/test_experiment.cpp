#include <doctest.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <string>
#include <unistd.h>

#include <json.hpp>

#include "boundary_rf/checkpoint.hpp"
#include "experiment.hpp"

using namespace brf;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) {
    path = fs::temp_directory_path() /
           ("brf_exp_" + name + "_" + std::to_string(static_cast<unsigned long>(::getpid())));
    std::error_code ec;
    fs::remove_all(path, ec);
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
};

// Small enough to run in well under a second.
ExperimentConfig tiny_config() {
  return parse_config(json::parse(R"({
    "name": "tiny",
    "seed": 11,
    "data": {
      "kind": "gaussian_mixture",
      "components": [
        {"mean": [2.0, 0.0], "stddev": 0.5, "weight": 1.0},
        {"mean": [-2.0, 0.0], "stddev": 0.5, "weight": 1.0}
      ]
    },
    "model": {
      "kind": "mask",
      "boundary_set": "standard_cosine",
      "data_mean_samples": 256,
      "hidden": [16, 16],
      "time_frequencies": 3
    },
    "training": {"steps": 30, "batch_size": 32, "log_every": 10},
    "sampling": {
      "n_samples": 64,
      "n_steps": 8,
      "samplers": [{"kind": "euler"}, {"kind": "overshoot", "c": 1.0}]
    },
    "eval": {
      "reference_samples": 128,
      "energy_samples": 64,
      "boundary_probes": 32,
      "grid": {"nx": 4, "ny": 4}
    }
  })"));
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  REQUIRE(f.good());
  return std::string((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
}

}  // namespace

TEST_CASE("run_experiment writes a complete, self-describing output tree") {
  TempDir tmp("run");
  const ExperimentConfig config = tiny_config();
  RunOptions options;
  options.quiet = true;
  const RunResult result = run_experiment(config, tmp.path, options);

  CHECK(result.config_digest == config.digest);
  CHECK(std::isfinite(result.final_loss));
  // The mask model is pinned at both endpoints no matter how little it trained.
  CHECK(result.boundary.t1_max == 0.0);
  CHECK(result.boundary.t0_max == 0.0);
  REQUIRE(result.samplers.size() == 2);
  CHECK(result.samplers[0].label == "euler");
  CHECK(result.samplers[1].label == "overshoot_c1");
  for (const auto& rep : result.samplers) {
    CHECK(std::isfinite(rep.energy_distance));
    CHECK(rep.cov_trace_ratio > 0.0);
  }

  // Everything the manifest lists exists, and vice versa nothing stray.
  const json manifest = json::parse(slurp(tmp.path / "manifest.json"));
  CHECK(manifest["config_digest"] == config.digest);
  CHECK(manifest["name"] == "tiny");
  std::set<std::string> listed;
  for (const auto& f : manifest["files"]) listed.insert(f.get<std::string>());
  CHECK(listed.count("model.ckpt") == 1);
  CHECK(listed.count("loss.csv") == 1);
  CHECK(listed.count("resolved_config.json") == 1);
  CHECK(listed.count("boundary_report.json") == 1);
  CHECK(listed.count("metrics.json") == 1);
  CHECK(listed.count("samples_euler.csv") == 1);
  CHECK(listed.count("samples_overshoot_c1.csv") == 1);
  for (const auto& f : listed) CHECK(fs::exists(tmp.path / f));

  std::set<std::string> on_disk;
  for (const auto& entry : fs::directory_iterator(tmp.path)) {
    const std::string name = entry.path().filename().string();
    if (name != "manifest.json") on_disk.insert(name);
  }
  CHECK(on_disk == listed);

  // The resolved config round-trips to the same digest.
  const ExperimentConfig resolved =
      parse_config(json::parse(slurp(tmp.path / "resolved_config.json")));
  CHECK(resolved.digest == config.digest);

  // Loss history has a header and one row per logged step (0, 10, 20, 29).
  const std::string loss_csv = slurp(tmp.path / "loss.csv");
  CHECK(std::count(loss_csv.begin(), loss_csv.end(), '\n') == 5);
}

TEST_CASE("reruns are byte identical and seeds matter") {
  TempDir tmp_a("rerun_a"), tmp_b("rerun_b"), tmp_c("rerun_c");
  RunOptions options;
  options.quiet = true;
  const ExperimentConfig config = tiny_config();

  const RunResult ra = run_experiment(config, tmp_a.path, options);
  const RunResult rb = run_experiment(config, tmp_b.path, options);
  REQUIRE(ra.files == rb.files);
  for (const auto& f : ra.files) {
    CAPTURE(f);
    CHECK(slurp(tmp_a.path / f) == slurp(tmp_b.path / f));
  }
  CHECK(slurp(tmp_a.path / "manifest.json") == slurp(tmp_b.path / "manifest.json"));

  ExperimentConfig reseeded = config;
  override_seed(reseeded, 12);
  const RunResult rc = run_experiment(reseeded, tmp_c.path, options);
  CHECK(rc.config_digest != ra.config_digest);
  CHECK(slurp(tmp_a.path / "model.ckpt") != slurp(tmp_c.path / "model.ckpt"));
  CHECK(rc.final_loss != ra.final_loss);
}

TEST_CASE("sampling from a checkpoint skips training and reproduces outputs") {
  TempDir tmp_full("ckpt_full"), tmp_loaded("ckpt_loaded");
  RunOptions options;
  options.quiet = true;
  const ExperimentConfig config = tiny_config();
  run_experiment(config, tmp_full.path, options);

  RunOptions from_ckpt;
  from_ckpt.quiet = true;
  from_ckpt.do_train = false;
  from_ckpt.checkpoint = tmp_full.path / "model.ckpt";
  const RunResult result = run_experiment(config, tmp_loaded.path, from_ckpt);

  // Same weights, same sampler streams: identical samples.
  CHECK(slurp(tmp_full.path / "samples_euler.csv") ==
        slurp(tmp_loaded.path / "samples_euler.csv"));
  CHECK(slurp(tmp_full.path / "samples_overshoot_c1.csv") ==
        slurp(tmp_loaded.path / "samples_overshoot_c1.csv"));
  // No training artifacts in the checkpoint-driven run.
  CHECK_FALSE(fs::exists(tmp_loaded.path / "loss.csv"));

  RunOptions missing;
  missing.quiet = true;
  missing.do_train = false;
  missing.checkpoint = tmp_full.path / "nope.ckpt";
  CHECK_THROWS_AS(run_experiment(config, tmp_loaded.path / "again", missing), CheckpointError);
}

TEST_CASE("eval-only stages still describe their outputs") {
  TempDir tmp("stages");
  RunOptions options;
  options.quiet = true;
  options.do_sample = false;
  options.do_eval = false;
  const RunResult result = run_experiment(tiny_config(), tmp.path, options);
  CHECK(fs::exists(tmp.path / "model.ckpt"));
  CHECK_FALSE(fs::exists(tmp.path / "samples_euler.csv"));
  CHECK_FALSE(fs::exists(tmp.path / "metrics.json"));
  for (const auto& f : result.files) CHECK(fs::exists(tmp.path / f));
}

TEST_CASE("sweeps fan out, summarize, and parallelize identically") {
  json j = json::parse(R"({
    "name": "sweepy",
    "seed": 5,
    "data": {"kind": "diagonal_gaussian", "mean": [0.5, -0.5], "var": [1.0, 0.5]},
    "model": {"kind": "mask", "hidden": [8], "time_frequencies": 2, "data_mean_samples": 64},
    "training": {"steps": 10, "batch_size": 16, "log_every": 5},
    "sampling": {"n_samples": 32, "n_steps": 6, "samplers": [{"kind": "euler"}]},
    "eval": {"reference_samples": 64, "energy_samples": 32, "boundary_probes": 16,
             "grid": {"nx": 3, "ny": 3}},
    "sweep": {"boundary_set": ["standard_cosine", "linear", "quadratic"]}
  })");
  const ExperimentConfig base = parse_config(j);

  TempDir tmp_seq("sweep_seq"), tmp_par("sweep_par");
  const auto child_dir = [](const fs::path& root, const SweepChild& child) {
    char prefix[16];
    std::snprintf(prefix, sizeof(prefix), "child_%03zu_", static_cast<std::size_t>(child.index));
    return root / (prefix + child.label);
  };
  const SweepResult seq = run_sweep(base, tmp_seq.path, 1, true);
  REQUIRE(seq.children.size() == 3);
  CHECK(seq.all_ok);
  CHECK_FALSE(seq.any_divergence);
  for (const auto& child : seq.children) {
    CHECK(child.status == "ok");
    CHECK(fs::exists(child_dir(tmp_seq.path, child) / "manifest.json"));
    // Every child is a mask model, so every child is pinned at t = 1.
    CHECK(child.result.boundary.t1_max == 0.0);
  }
  REQUIRE(fs::exists(seq.summary_csv));
  const std::string summary = slurp(seq.summary_csv);
  CHECK(std::count(summary.begin(), summary.end(), '\n') == 4);  // header + 3 children
  CHECK(summary.find("standard_cosine") != std::string::npos);
  CHECK(summary.find("quadratic") != std::string::npos);

  const SweepResult par = run_sweep(base, tmp_par.path, 4, true);
  CHECK(slurp(seq.summary_csv) == slurp(par.summary_csv));
  for (const auto& child : seq.children) {
    CHECK(slurp(child_dir(tmp_seq.path, child) / "manifest.json") ==
          slurp(child_dir(tmp_par.path, child) / "manifest.json"));
    CHECK(slurp(child_dir(tmp_seq.path, child) / "samples_euler.csv") ==
          slurp(child_dir(tmp_par.path, child) / "samples_euler.csv"));
  }
}
