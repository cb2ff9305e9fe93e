#include "experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <mutex>
#include <thread>

#include <json.hpp>

#include "boundary_rf/checkpoint.hpp"
#include "boundary_rf/flow.hpp"
#include "boundary_rf/rng.hpp"
#include "boundary_rf/samplers.hpp"
#include "boundary_rf/training.hpp"
#include "svg.hpp"

namespace brf {

namespace {

using nlohmann::json;

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

void write_text(const std::filesystem::path& path, const std::string& content) {
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  require(static_cast<bool>(file), "cannot open for writing: " + path.string());
  file.write(content.data(), static_cast<std::streamsize>(content.size()));
  require(static_cast<bool>(file), "failed writing: " + path.string());
}

void write_json(const std::filesystem::path& path, const json& j) {
  write_text(path, j.dump(2) + "\n");
}

// One row per sample (columns of the matrix), coordinates c0..c{d-1}.
std::string samples_csv(const Mat& samples) {
  std::string out;
  for (Index r = 0; r < samples.rows(); ++r) out += (r ? ",c" : "c") + std::to_string(r);
  out += "\n";
  for (Index j = 0; j < samples.cols(); ++j) {
    for (Index r = 0; r < samples.rows(); ++r) {
      if (r) out += ",";
      out += fmt(samples(r, j));
    }
    out += "\n";
  }
  return out;
}

std::string grid_csv(const GridField& field) {
  std::string out = "x,y,vx,vy\n";
  for (Index j = 0; j < field.points.cols(); ++j)
    out += fmt(field.points(0, j)) + "," + fmt(field.points(1, j)) + "," +
           fmt(field.values(0, j)) + "," + fmt(field.values(1, j)) + "\n";
  return out;
}

json moments_json(const MomentSummary& m) {
  return {{"mean", std::vector<double>(m.mean.data(), m.mean.data() + m.mean.size())},
          {"stddev", std::vector<double>(m.stddev.data(), m.stddev.data() + m.stddev.size())},
          {"cov_trace", m.cov_trace}};
}

Mat run_sampler(const SamplerConfig& cfg, const VelocityField& field, const TimeGrid& grid,
                Mat z0, std::uint64_t seed) {
  if (cfg.kind == "euler") return euler_sample(field, grid, std::move(z0));
  if (cfg.kind == "curved_euler") return curved_euler_sample(field, grid, std::move(z0), seed);
  if (cfg.kind == "langevin")
    return langevin_sample(field, grid, std::move(z0), cfg.sigma(), seed);
  if (cfg.kind == "overshoot")
    return overshoot_sample(field, grid, std::move(z0), cfg.overshoot_c, seed);
  throw ConfigError("unknown sampler kind: " + cfg.kind);
}

}  // namespace

RunResult run_experiment(const ExperimentConfig& config, const std::filesystem::path& out_dir,
                         const RunOptions& options) {
  std::filesystem::create_directories(out_dir);
  RunResult result;
  result.out_dir = out_dir;
  result.config_digest = config.digest;

  const auto log = [&](const std::string& line) {
    if (!options.quiet) std::cerr << "[" << config.name << "] " << line << "\n";
  };
  const auto emit = [&](const std::string& rel, const std::string& content) {
    write_text(out_dir / rel, content);
    result.files.push_back(rel);
  };

  const std::uint64_t seed_data_mean = derive_seed(config.seed, "data_mean");
  const std::uint64_t seed_model_init = derive_seed(config.seed, "model_init");
  const std::uint64_t seed_train = derive_seed(config.seed, "train");
  const std::uint64_t seed_eval = derive_seed(config.seed, "eval");

  const std::shared_ptr<const DataDistribution> data = config.data.make();
  const Index dim = data->dim();

  // Reference point C for the t = 0 boundary; the mask model also bakes
  // this into its parameterization.
  Vec data_mean;
  if (config.model.data_mean_mode == "zero") {
    data_mean = Vec::Zero(dim);
  } else {
    data_mean = estimate_data_mean(*data, config.model.data_mean_samples, seed_data_mean);
  }

  std::unique_ptr<TrainableVelocity> model;
  CheckpointInfo info{seed_model_init, 0};
  bool trained_here = false;
  if (!options.checkpoint.empty()) {
    model = load_checkpoint(options.checkpoint, &info);
    require(model->dim() == dim, "checkpoint dimension does not match the data config");
    if (const Vec* c = model->data_mean()) data_mean = *c;
    log("loaded checkpoint " + options.checkpoint.string() + " (" + std::string(model->kind()) +
        ", " + std::to_string(info.train_steps) + " steps)");
  } else {
    const BoundaryFunctionSet boundary = BoundaryFunctionSet::named(config.model.boundary_set);
    model = make_velocity_model(config.model.kind, config.model.arch(dim), seed_model_init,
                                &boundary, &data_mean);
    if (options.do_train && config.training.steps > 0) {
      log("training " + config.model.kind + " model, " + std::to_string(config.training.steps) +
          " steps");
      const TrainResult tr =
          train(*model, data, config.training.make(), seed_train, [&](Index k, double loss) {
            log("step " + std::to_string(k) + " loss " + fmt(loss));
          });
      result.final_loss = tr.final_loss;
      info.train_steps = config.training.steps;
      trained_here = true;
      std::string csv = "step,loss\n";
      for (const LossRecord& rec : tr.history)
        csv += std::to_string(rec.step) + "," + fmt(rec.loss) + "\n";
      emit("loss.csv", csv);
    }
  }
  if (trained_here || options.checkpoint.empty()) {
    save_checkpoint(out_dir / "model.ckpt", *model, info);
    result.files.push_back("model.ckpt");
  }

  std::vector<std::pair<SamplerConfig, Mat>> sampled;
  if (options.do_sample || options.do_eval) {
    const TimeGrid grid = make_time_grid(config.sampling.n_steps);
    for (const SamplerConfig& cfg : config.sampling.samplers) {
      const std::string label = cfg.label();
      const std::uint64_t seed_k = derive_seed(config.seed, "sample." + label);
      Mat z0 = standard_normal_matrix(dim, config.sampling.n_samples, seed_k, "sampler.init");
      log("sampling " + label + " (" + std::to_string(config.sampling.n_samples) + " samples, " +
          std::to_string(config.sampling.n_steps) + " steps)");
      Mat z = run_sampler(cfg, *model, grid, std::move(z0), seed_k);
      if (options.do_sample) {
        emit("samples_" + label + ".csv", samples_csv(z));
        if (dim == 2) {
          write_scatter_svg(out_dir / ("samples_" + label + ".svg"), z, label);
          result.files.push_back("samples_" + label + ".svg");
        }
      }
      sampled.emplace_back(cfg, std::move(z));
    }
  }

  if (options.do_eval) {
    log("evaluating");
    // Probe points near both ends of the flow: source draws plus data draws.
    const Index n_noise = (config.eval.boundary_probes + 1) / 2;
    const Index n_data = config.eval.boundary_probes - n_noise;
    Mat probes(dim, config.eval.boundary_probes);
    probes.leftCols(n_noise) = standard_normal_matrix(dim, n_noise, seed_eval, "eval.probe.noise");
    if (n_data > 0)
      probes.rightCols(n_data) =
          CouplingSampler(data, seed_eval).sample_data_only(n_data, "eval.probe.data");

    result.boundary = boundary_violation(*model, probes, data_mean);
    write_json(out_dir / "boundary_report.json",
               json{{"t1_max", result.boundary.t1_max},
                    {"t1_mean", result.boundary.t1_mean},
                    {"t0_max", result.boundary.t0_max},
                    {"t0_mean", result.boundary.t0_mean},
                    {"probes", probes.cols()}});
    result.files.push_back("boundary_report.json");

    result.score_profile =
        score_norm_profile(*model, probes, config.eval.score_profile_times);
    std::string profile_csv = "requested_t,effective_t,mean_score_norm\n";
    json profile_json = json::array();
    for (std::size_t i = 0; i < result.score_profile.requested_times.size(); ++i) {
      profile_csv += fmt(result.score_profile.requested_times[i]) + "," +
                     fmt(result.score_profile.effective_times[i]) + "," +
                     fmt(result.score_profile.mean_norm[i]) + "\n";
      profile_json.push_back({{"requested_t", result.score_profile.requested_times[i]},
                              {"effective_t", result.score_profile.effective_times[i]},
                              {"mean_score_norm", result.score_profile.mean_norm[i]}});
    }
    emit("score_profile.csv", profile_csv);
    write_json(out_dir / "score_profile.json", profile_json);
    result.files.push_back("score_profile.json");

    const Mat reference = CouplingSampler(data, seed_eval)
                              .sample_data_only(config.eval.reference_samples, "eval.reference");
    json sampler_metrics = json::object();
    for (const auto& [cfg, z] : sampled) {
      SamplerReport rep;
      rep.label = cfg.label();
      rep.moments = moment_summary(z);
      const Index ne = std::min({config.eval.energy_samples, z.cols(), reference.cols()});
      rep.energy_distance = energy_distance(z.leftCols(ne), reference.leftCols(ne));
      rep.cov_trace_ratio = rep.moments.cov_trace / data->covariance_trace();
      json entry = moments_json(rep.moments);
      entry["energy_distance"] = rep.energy_distance;
      entry["energy_samples"] = ne;
      entry["cov_trace_ratio"] = rep.cov_trace_ratio;
      sampler_metrics[rep.label] = entry;
      result.samplers.push_back(std::move(rep));
    }
    const Vec analytic_mean = data->mean();
    write_json(out_dir / "metrics.json",
               json{{"reference",
                     {{"analytic_mean", std::vector<double>(analytic_mean.data(),
                                                            analytic_mean.data() +
                                                                analytic_mean.size())},
                      {"analytic_cov_trace", data->covariance_trace()},
                      {"empirical", moments_json(moment_summary(reference))}}},
                    {"samplers", sampler_metrics}});
    result.files.push_back("metrics.json");

    if (dim == 2) {
      const GridField vel = velocity_field_on_grid(*model, config.eval.grid, 1.0);
      emit("velocity_t1.csv", grid_csv(vel));
      write_quiver_svg(out_dir / "velocity_t1.svg", vel, "velocity at t = 1");
      result.files.push_back("velocity_t1.svg");

      const GridField sc =
          score_field_on_grid(*model, config.eval.grid, config.eval.score_grid_time);
      emit("score_grid.csv", grid_csv(sc));
      write_quiver_svg(out_dir / "score_grid.svg", sc, "score at t = " + fmt(sc.effective_t));
      result.files.push_back("score_grid.svg");
    }
  }

  write_json(out_dir / "resolved_config.json", config.canonical);
  result.files.push_back("resolved_config.json");

  std::sort(result.files.begin(), result.files.end());
  json manifest{{"name", config.name},
                {"config_digest", config.digest},
                {"seed", config.seed},
                {"stage_seeds",
                 {{"data_mean", seed_data_mean},
                  {"model_init", seed_model_init},
                  {"train", seed_train},
                  {"eval", seed_eval}}},
                {"model_kind", std::string(model->kind())},
                {"files", result.files}};
  write_json(out_dir / "manifest.json", manifest);
  log("done, outputs in " + out_dir.string());
  return result;
}

SweepResult run_sweep(const ExperimentConfig& base, const std::filesystem::path& out_dir,
                      int workers, bool quiet) {
  require(workers >= 1, "run_sweep: workers must be >= 1");
  std::filesystem::create_directories(out_dir);
  const std::vector<SweepPoint> points = expand_sweep(base);

  SweepResult sweep;
  sweep.children.resize(points.size());
  std::atomic<std::size_t> cursor{0};
  std::mutex log_mutex;

  const auto worker = [&]() {
    while (true) {
      const std::size_t i = cursor.fetch_add(1);
      if (i >= points.size()) return;
      SweepChild& child = sweep.children[i];
      child.index = points[i].index;
      child.label = points[i].label;
      child.config = points[i].config;
      char prefix[16];
      std::snprintf(prefix, sizeof(prefix), "child_%03zu_", i);
      const std::filesystem::path child_dir = out_dir / (prefix + child.label);
      if (!quiet) {
        const std::lock_guard<std::mutex> lock(log_mutex);
        std::cerr << "[sweep] start " << child.label << "\n";
      }
      try {
        RunOptions opts;
        opts.quiet = true;
        child.result = run_experiment(child.config, child_dir, opts);
        child.status = "ok";
      } catch (const DivergenceError& e) {
        child.status = "divergence";
        child.message = e.what();
      } catch (const SingularTimeError& e) {
        child.status = "divergence";
        child.message = e.what();
      } catch (const ConfigError& e) {
        child.status = "config_error";
        child.message = e.what();
      } catch (const std::exception& e) {
        child.status = "error";
        child.message = e.what();
      }
      if (!quiet) {
        const std::lock_guard<std::mutex> lock(log_mutex);
        std::cerr << "[sweep] " << child.status << " " << child.label
                  << (child.message.empty() ? "" : ": " + child.message) << "\n";
      }
    }
  };

  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  std::string csv =
      "index,label,status,boundary_set,overshoot_c,n_steps,seed,config_digest,final_loss,"
      "boundary_t1_max,boundary_t0_max,sampler,energy_distance,cov_trace_ratio,message\n";
  for (const SweepChild& child : sweep.children) {
    sweep.all_ok = sweep.all_ok && child.status == "ok";
    sweep.any_divergence = sweep.any_divergence || child.status == "divergence";
    double first_c = -1.0;
    for (const auto& s : child.config.sampling.samplers)
      if (s.kind == "overshoot") {
        first_c = s.overshoot_c;
        break;
      }
    csv += std::to_string(child.index) + "," + child.label + "," + child.status + "," +
           child.config.model.boundary_set + "," + (first_c >= 0.0 ? fmt(first_c) : "") + "," +
           std::to_string(child.config.sampling.n_steps) + "," +
           std::to_string(child.config.seed) + "," + child.config.digest + ",";
    if (child.status == "ok") {
      csv += fmt(child.result.final_loss) + "," + fmt(child.result.boundary.t1_max) + "," +
             fmt(child.result.boundary.t0_max) + ",";
      if (!child.result.samplers.empty()) {
        const SamplerReport& rep = child.result.samplers.front();
        csv += rep.label + "," + fmt(rep.energy_distance) + "," + fmt(rep.cov_trace_ratio);
      } else {
        csv += ",,";
      }
    } else {
      csv += ",,,,,";
    }
    std::string msg = child.message;
    std::replace(msg.begin(), msg.end(), ',', ';');
    std::replace(msg.begin(), msg.end(), '\n', ' ');
    csv += "," + msg + "\n";
  }
  sweep.summary_csv = out_dir / "summary.csv";
  write_text(sweep.summary_csv, csv);
  return sweep;
}

}  // namespace brf
