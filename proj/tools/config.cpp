#include "config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "boundary_rf/boundary_functions.hpp"
#include "boundary_rf/rng.hpp"

namespace brf {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
  throw ConfigError("config error at " + path + ": " + msg);
}

void check_keys(const json& j, const std::string& path, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) fail(path, "expected an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (std::none_of(allowed.begin(), allowed.end(),
                     [&](const char* k) { return it.key() == k; }))
      fail(path + "." + it.key(), "unknown key");
  }
}

const json* find(const json& j, const char* key) {
  const auto it = j.find(key);
  return it == j.end() ? nullptr : &*it;
}

const json& required(const json& j, const std::string& path, const char* key) {
  const json* v = find(j, key);
  if (v == nullptr) fail(path + "." + key, "missing required key");
  return *v;
}

std::string get_string(const json& j, const std::string& path) {
  if (!j.is_string()) fail(path, "expected a string");
  return j.get<std::string>();
}

double get_double(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  return j.get<double>();
}

Index get_index(const json& j, const std::string& path) {
  if (!j.is_number_integer()) fail(path, "expected an integer");
  return j.get<Index>();
}

std::uint64_t get_u64(const json& j, const std::string& path) {
  if (!j.is_number_unsigned()) fail(path, "expected a nonnegative integer");
  return j.get<std::uint64_t>();
}

std::vector<double> get_double_array(const json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i)
    out.push_back(get_double(j[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

std::vector<Index> get_index_array(const json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array of integers");
  std::vector<Index> out;
  for (std::size_t i = 0; i < j.size(); ++i)
    out.push_back(get_index(j[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

std::string format_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", x);
  return buf;
}

DataConfig parse_data(const json& j, const std::string& path) {
  DataConfig data;
  data.kind = get_string(required(j, path, "kind"), path + ".kind");
  if (data.kind == "diagonal_gaussian") {
    check_keys(j, path, {"kind", "mean", "var"});
    data.mean = get_double_array(required(j, path, "mean"), path + ".mean");
    data.var = get_double_array(required(j, path, "var"), path + ".var");
    if (data.mean.empty() || data.mean.size() != data.var.size())
      fail(path, "mean and var must be nonempty and the same length");
    for (const double v : data.var)
      if (!(v > 0.0)) fail(path + ".var", "variances must be positive");
  } else if (data.kind == "gaussian_mixture") {
    check_keys(j, path, {"kind", "components"});
    const json& comps = required(j, path, "components");
    if (!comps.is_array() || comps.empty()) fail(path + ".components", "expected a nonempty array");
    for (std::size_t i = 0; i < comps.size(); ++i) {
      const std::string cpath = path + ".components[" + std::to_string(i) + "]";
      check_keys(comps[i], cpath, {"mean", "stddev", "weight"});
      DataConfig::MixtureComponent c;
      c.mean = get_double_array(required(comps[i], cpath, "mean"), cpath + ".mean");
      c.stddev = get_double(required(comps[i], cpath, "stddev"), cpath + ".stddev");
      if (const json* w = find(comps[i], "weight")) c.weight = get_double(*w, cpath + ".weight");
      if (c.mean.empty()) fail(cpath + ".mean", "must be nonempty");
      if (c.mean.size() != comps[0]["mean"].size()) fail(cpath + ".mean", "inconsistent dimension");
      if (!(c.stddev > 0.0)) fail(cpath + ".stddev", "must be positive");
      if (!(c.weight > 0.0)) fail(cpath + ".weight", "must be positive");
      data.components.push_back(std::move(c));
    }
  } else {
    fail(path + ".kind", "unknown data kind: " + data.kind);
  }
  return data;
}

ModelConfig parse_model(const json& j, const std::string& path) {
  check_keys(j, path,
             {"kind", "boundary_set", "data_mean_mode", "data_mean_samples", "hidden",
              "time_frequencies", "activation"});
  ModelConfig m;
  m.kind = get_string(required(j, path, "kind"), path + ".kind");
  if (m.kind != "vanilla" && m.kind != "mask" && m.kind != "subtraction")
    fail(path + ".kind", "unknown model kind: " + m.kind);
  if (const json* v = find(j, "boundary_set")) {
    m.boundary_set = get_string(*v, path + ".boundary_set");
    const auto& names = BoundaryFunctionSet::names();
    if (std::find(names.begin(), names.end(), m.boundary_set) == names.end())
      fail(path + ".boundary_set", "unknown boundary set: " + m.boundary_set);
  }
  if (const json* v = find(j, "data_mean_mode")) {
    m.data_mean_mode = get_string(*v, path + ".data_mean_mode");
    if (m.data_mean_mode != "empirical" && m.data_mean_mode != "zero")
      fail(path + ".data_mean_mode", "expected \"empirical\" or \"zero\"");
  }
  if (const json* v = find(j, "data_mean_samples")) {
    m.data_mean_samples = get_index(*v, path + ".data_mean_samples");
    if (m.data_mean_samples < 1) fail(path + ".data_mean_samples", "must be positive");
  }
  if (const json* v = find(j, "hidden")) {
    m.hidden = get_index_array(*v, path + ".hidden");
    for (const Index h : m.hidden)
      if (h < 1) fail(path + ".hidden", "layer widths must be positive");
  }
  if (const json* v = find(j, "time_frequencies")) {
    m.time_frequencies = static_cast<int>(get_index(*v, path + ".time_frequencies"));
    if (m.time_frequencies < 0) fail(path + ".time_frequencies", "must be >= 0");
  }
  if (const json* v = find(j, "activation")) {
    m.activation = get_string(*v, path + ".activation");
    try {
      activation_from_name(m.activation);
    } catch (const std::invalid_argument& e) {
      fail(path + ".activation", e.what());
    }
  }
  return m;
}

TimeSamplerConfig parse_time_sampler(const json& j, const std::string& path) {
  check_keys(j, path, {"kind", "logit_mean", "logit_std"});
  TimeSamplerConfig ts;
  ts.kind = get_string(required(j, path, "kind"), path + ".kind");
  if (ts.kind != "uniform" && ts.kind != "logit_normal")
    fail(path + ".kind", "expected \"uniform\" or \"logit_normal\"");
  if (const json* v = find(j, "logit_mean")) ts.logit_mean = get_double(*v, path + ".logit_mean");
  if (const json* v = find(j, "logit_std")) {
    ts.logit_std = get_double(*v, path + ".logit_std");
    if (!(ts.logit_std > 0.0)) fail(path + ".logit_std", "must be positive");
  }
  return ts;
}

TrainingSection parse_training(const json& j, const std::string& path) {
  check_keys(j, path,
             {"steps", "batch_size", "learning_rate", "adam_beta1", "adam_beta2", "adam_epsilon",
              "time_sampler", "loss_weight_scale", "log_every"});
  TrainingSection t;
  if (const json* v = find(j, "steps")) {
    t.steps = get_index(*v, path + ".steps");
    if (t.steps < 0) fail(path + ".steps", "must be >= 0");
  }
  if (const json* v = find(j, "batch_size")) {
    t.batch_size = get_index(*v, path + ".batch_size");
    if (t.batch_size < 1) fail(path + ".batch_size", "must be positive");
  }
  if (const json* v = find(j, "learning_rate")) {
    t.learning_rate = get_double(*v, path + ".learning_rate");
    if (!(t.learning_rate > 0.0)) fail(path + ".learning_rate", "must be positive");
  }
  if (const json* v = find(j, "adam_beta1")) t.adam_beta1 = get_double(*v, path + ".adam_beta1");
  if (const json* v = find(j, "adam_beta2")) t.adam_beta2 = get_double(*v, path + ".adam_beta2");
  if (const json* v = find(j, "adam_epsilon")) t.adam_epsilon = get_double(*v, path + ".adam_epsilon");
  if (t.adam_beta1 < 0.0 || t.adam_beta1 >= 1.0) fail(path + ".adam_beta1", "must be in [0, 1)");
  if (t.adam_beta2 < 0.0 || t.adam_beta2 >= 1.0) fail(path + ".adam_beta2", "must be in [0, 1)");
  if (!(t.adam_epsilon > 0.0)) fail(path + ".adam_epsilon", "must be positive");
  if (const json* v = find(j, "time_sampler"))
    t.time_sampler = parse_time_sampler(*v, path + ".time_sampler");
  if (const json* v = find(j, "loss_weight_scale")) {
    t.loss_weight_scale = get_double(*v, path + ".loss_weight_scale");
    if (!(t.loss_weight_scale >= 0.0) || !std::isfinite(t.loss_weight_scale))
      fail(path + ".loss_weight_scale", "must be finite and >= 0");
  }
  if (const json* v = find(j, "log_every")) {
    t.log_every = get_index(*v, path + ".log_every");
    if (t.log_every < 1) fail(path + ".log_every", "must be positive");
  }
  return t;
}

SamplerConfig parse_sampler(const json& j, const std::string& path) {
  SamplerConfig s;
  s.kind = get_string(required(j, path, "kind"), path + ".kind");
  if (s.kind == "euler" || s.kind == "curved_euler") {
    check_keys(j, path, {"kind"});
  } else if (s.kind == "langevin") {
    check_keys(j, path, {"kind", "sigma_kind", "sigma0"});
    if (const json* v = find(j, "sigma_kind")) {
      s.sigma_kind = get_string(*v, path + ".sigma_kind");
      if (s.sigma_kind != "constant" && s.sigma_kind != "triangular")
        fail(path + ".sigma_kind", "expected \"constant\" or \"triangular\"");
    }
    if (const json* v = find(j, "sigma0")) {
      s.sigma0 = get_double(*v, path + ".sigma0");
      if (s.sigma0 < 0.0) fail(path + ".sigma0", "must be >= 0");
    }
  } else if (s.kind == "overshoot") {
    check_keys(j, path, {"kind", "c"});
    if (const json* v = find(j, "c")) {
      s.overshoot_c = get_double(*v, path + ".c");
      if (s.overshoot_c < 0.0) fail(path + ".c", "must be >= 0");
    }
  } else {
    fail(path + ".kind", "unknown sampler kind: " + s.kind);
  }
  return s;
}

SamplingSection parse_sampling(const json& j, const std::string& path) {
  check_keys(j, path, {"n_samples", "n_steps", "samplers"});
  SamplingSection s;
  if (const json* v = find(j, "n_samples")) {
    s.n_samples = get_index(*v, path + ".n_samples");
    if (s.n_samples < 1) fail(path + ".n_samples", "must be positive");
  }
  if (const json* v = find(j, "n_steps")) {
    s.n_steps = get_index(*v, path + ".n_steps");
    if (s.n_steps < 1) fail(path + ".n_steps", "must be positive");
  }
  if (const json* v = find(j, "samplers")) {
    if (!v->is_array() || v->empty()) fail(path + ".samplers", "expected a nonempty array");
    for (std::size_t i = 0; i < v->size(); ++i)
      s.samplers.push_back(parse_sampler((*v)[i], path + ".samplers[" + std::to_string(i) + "]"));
  } else {
    s.samplers.push_back(SamplerConfig{.kind = "euler"});
  }
  for (std::size_t i = 0; i < s.samplers.size(); ++i)
    for (std::size_t k = i + 1; k < s.samplers.size(); ++k)
      if (s.samplers[i].label() == s.samplers[k].label())
        fail(path + ".samplers", "duplicate sampler entry: " + s.samplers[i].label());
  return s;
}

EvalSection parse_eval(const json& j, const std::string& path) {
  check_keys(j, path,
             {"reference_samples", "energy_samples", "boundary_probes", "score_profile_times",
              "grid", "score_grid_time"});
  EvalSection e;
  if (const json* v = find(j, "reference_samples")) {
    e.reference_samples = get_index(*v, path + ".reference_samples");
    if (e.reference_samples < 2) fail(path + ".reference_samples", "need at least 2");
  }
  if (const json* v = find(j, "energy_samples")) {
    e.energy_samples = get_index(*v, path + ".energy_samples");
    if (e.energy_samples < 2) fail(path + ".energy_samples", "need at least 2");
  }
  if (const json* v = find(j, "boundary_probes")) {
    e.boundary_probes = get_index(*v, path + ".boundary_probes");
    if (e.boundary_probes < 1) fail(path + ".boundary_probes", "must be positive");
  }
  if (const json* v = find(j, "score_profile_times")) {
    e.score_profile_times = get_double_array(*v, path + ".score_profile_times");
    if (e.score_profile_times.empty()) fail(path + ".score_profile_times", "must be nonempty");
    for (const double t : e.score_profile_times)
      if (t < 0.0 || t > 1.0) fail(path + ".score_profile_times", "times must lie in [0, 1]");
  }
  if (const json* v = find(j, "grid")) {
    const std::string gpath = path + ".grid";
    check_keys(*v, gpath, {"x_min", "x_max", "y_min", "y_max", "nx", "ny"});
    if (const json* g = find(*v, "x_min")) e.grid.x_min = get_double(*g, gpath + ".x_min");
    if (const json* g = find(*v, "x_max")) e.grid.x_max = get_double(*g, gpath + ".x_max");
    if (const json* g = find(*v, "y_min")) e.grid.y_min = get_double(*g, gpath + ".y_min");
    if (const json* g = find(*v, "y_max")) e.grid.y_max = get_double(*g, gpath + ".y_max");
    if (const json* g = find(*v, "nx")) e.grid.nx = get_index(*g, gpath + ".nx");
    if (const json* g = find(*v, "ny")) e.grid.ny = get_index(*g, gpath + ".ny");
    if (!(e.grid.x_max > e.grid.x_min) || !(e.grid.y_max > e.grid.y_min))
      fail(gpath, "empty extent");
    if (e.grid.nx < 2 || e.grid.ny < 2) fail(gpath, "need at least 2 points per axis");
  }
  if (const json* v = find(j, "score_grid_time")) {
    e.score_grid_time = get_double(*v, path + ".score_grid_time");
    if (e.score_grid_time < 0.0 || e.score_grid_time >= 1.0)
      fail(path + ".score_grid_time", "must lie in [0, 1)");
  }
  return e;
}

SweepSection parse_sweep(const json& j, const std::string& path) {
  check_keys(j, path, {"boundary_set", "overshoot_c", "n_steps"});
  SweepSection s;
  if (const json* v = find(j, "boundary_set")) {
    if (!v->is_array()) fail(path + ".boundary_set", "expected an array of names");
    for (std::size_t i = 0; i < v->size(); ++i) {
      const std::string name =
          get_string((*v)[i], path + ".boundary_set[" + std::to_string(i) + "]");
      const auto& names = BoundaryFunctionSet::names();
      if (std::find(names.begin(), names.end(), name) == names.end())
        fail(path + ".boundary_set[" + std::to_string(i) + "]", "unknown boundary set: " + name);
      s.boundary_set.push_back(name);
    }
  }
  if (const json* v = find(j, "overshoot_c")) {
    s.overshoot_c = get_double_array(*v, path + ".overshoot_c");
    for (const double c : s.overshoot_c)
      if (c < 0.0) fail(path + ".overshoot_c", "must be >= 0");
  }
  if (const json* v = find(j, "n_steps")) {
    s.n_steps = get_index_array(*v, path + ".n_steps");
    for (const Index n : s.n_steps)
      if (n < 1) fail(path + ".n_steps", "must be positive");
  }
  return s;
}

json canonical_json(const ExperimentConfig& c) {
  json root;
  root["name"] = c.name;
  root["seed"] = c.seed;
  json data;
  data["kind"] = c.data.kind;
  if (c.data.kind == "diagonal_gaussian") {
    data["mean"] = c.data.mean;
    data["var"] = c.data.var;
  } else {
    json comps = json::array();
    for (const auto& comp : c.data.components)
      comps.push_back({{"mean", comp.mean}, {"stddev", comp.stddev}, {"weight", comp.weight}});
    data["components"] = comps;
  }
  root["data"] = data;
  root["model"] = {{"kind", c.model.kind},
                   {"boundary_set", c.model.boundary_set},
                   {"data_mean_mode", c.model.data_mean_mode},
                   {"data_mean_samples", c.model.data_mean_samples},
                   {"hidden", c.model.hidden},
                   {"time_frequencies", c.model.time_frequencies},
                   {"activation", c.model.activation}};
  root["training"] = {{"steps", c.training.steps},
                      {"batch_size", c.training.batch_size},
                      {"learning_rate", c.training.learning_rate},
                      {"adam_beta1", c.training.adam_beta1},
                      {"adam_beta2", c.training.adam_beta2},
                      {"adam_epsilon", c.training.adam_epsilon},
                      {"time_sampler",
                       {{"kind", c.training.time_sampler.kind},
                        {"logit_mean", c.training.time_sampler.logit_mean},
                        {"logit_std", c.training.time_sampler.logit_std}}},
                      {"loss_weight_scale", c.training.loss_weight_scale},
                      {"log_every", c.training.log_every}};
  json samplers = json::array();
  for (const auto& s : c.sampling.samplers) {
    json entry{{"kind", s.kind}};
    if (s.kind == "langevin") {
      entry["sigma_kind"] = s.sigma_kind;
      entry["sigma0"] = s.sigma0;
    } else if (s.kind == "overshoot") {
      entry["c"] = s.overshoot_c;
    }
    samplers.push_back(entry);
  }
  root["sampling"] = {{"n_samples", c.sampling.n_samples},
                      {"n_steps", c.sampling.n_steps},
                      {"samplers", samplers}};
  root["eval"] = {{"reference_samples", c.eval.reference_samples},
                  {"energy_samples", c.eval.energy_samples},
                  {"boundary_probes", c.eval.boundary_probes},
                  {"score_profile_times", c.eval.score_profile_times},
                  {"grid",
                   {{"x_min", c.eval.grid.x_min},
                    {"x_max", c.eval.grid.x_max},
                    {"y_min", c.eval.grid.y_min},
                    {"y_max", c.eval.grid.y_max},
                    {"nx", c.eval.grid.nx},
                    {"ny", c.eval.grid.ny}}},
                  {"score_grid_time", c.eval.score_grid_time}};
  if (!c.sweep.empty()) {
    json sweep;
    if (!c.sweep.boundary_set.empty()) sweep["boundary_set"] = c.sweep.boundary_set;
    if (!c.sweep.overshoot_c.empty()) sweep["overshoot_c"] = c.sweep.overshoot_c;
    if (!c.sweep.n_steps.empty()) sweep["n_steps"] = c.sweep.n_steps;
    root["sweep"] = sweep;
  }
  return root;
}

void finalize(ExperimentConfig& c) {
  c.canonical = canonical_json(c);
  char buf[24];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(hash_tag(c.canonical.dump())));
  c.digest = buf;
}

}  // namespace

Index DataConfig::dim() const {
  return kind == "diagonal_gaussian" ? static_cast<Index>(mean.size())
                                     : static_cast<Index>(components.front().mean.size());
}

std::shared_ptr<const DataDistribution> DataConfig::make() const {
  if (kind == "diagonal_gaussian") {
    const Vec m = Eigen::Map<const Vec>(mean.data(), static_cast<Index>(mean.size()));
    const Vec v = Eigen::Map<const Vec>(var.data(), static_cast<Index>(var.size()));
    return std::make_shared<DiagonalGaussian>(GaussianSpec(m, v));
  }
  std::vector<IsotropicGaussianMixture::Component> comps;
  for (const auto& c : components) {
    IsotropicGaussianMixture::Component out;
    out.mean = Eigen::Map<const Vec>(c.mean.data(), static_cast<Index>(c.mean.size()));
    out.stddev = c.stddev;
    out.weight = c.weight;
    comps.push_back(std::move(out));
  }
  return std::make_shared<IsotropicGaussianMixture>(std::move(comps));
}

MlpArch ModelConfig::arch(Index data_dim) const {
  MlpArch arch;
  arch.data_dim = data_dim;
  arch.hidden = hidden;
  arch.time_frequencies = time_frequencies;
  arch.activation = activation_from_name(activation);
  return arch;
}

TimeSampler TimeSamplerConfig::make() const {
  TimeSampler ts;
  ts.kind = time_sampler_kind_from_name(kind);
  ts.logit_mean = logit_mean;
  ts.logit_std = logit_std;
  return ts;
}

TrainConfig TrainingSection::make() const {
  TrainConfig t;
  t.steps = steps;
  t.batch_size = batch_size;
  t.adam = AdamConfig{learning_rate, adam_beta1, adam_beta2, adam_epsilon};
  t.time_sampler = time_sampler.make();
  t.weight = LossWeight{loss_weight_scale, {}};
  t.log_every = log_every;
  return t;
}

std::string SamplerConfig::label() const {
  if (kind == "langevin") return "langevin_" + sigma_kind + "_" + format_number(sigma0);
  if (kind == "overshoot") return "overshoot_c" + format_number(overshoot_c);
  return kind;
}

SigmaSchedule SamplerConfig::sigma() const {
  return sigma_kind == "constant" ? SigmaSchedule::constant(sigma0)
                                  : SigmaSchedule::triangular(sigma0);
}

ExperimentConfig parse_config(const nlohmann::json& root) {
  if (!root.is_object()) throw ConfigError("config error at $: expected a JSON object");
  check_keys(root, "$", {"name", "seed", "data", "model", "training", "sampling", "eval", "sweep"});
  ExperimentConfig c;
  c.name = get_string(required(root, "$", "name"), "$.name");
  if (c.name.empty()) fail("$.name", "must be nonempty");
  c.seed = get_u64(required(root, "$", "seed"), "$.seed");
  c.data = parse_data(required(root, "$", "data"), "$.data");
  c.model = parse_model(required(root, "$", "model"), "$.model");
  if (const json* v = find(root, "training")) c.training = parse_training(*v, "$.training");
  if (const json* v = find(root, "sampling"))
    c.sampling = parse_sampling(*v, "$.sampling");
  else
    c.sampling.samplers.push_back(SamplerConfig{.kind = "euler"});
  if (const json* v = find(root, "eval")) c.eval = parse_eval(*v, "$.eval");
  if (const json* v = find(root, "sweep")) c.sweep = parse_sweep(*v, "$.sweep");
  finalize(c);
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream file(path);
  if (!file) throw ConfigError("cannot open config file: " + path.string());
  nlohmann::json root;
  try {
    root = nlohmann::json::parse(file);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config error in " + path.string() + ": " + e.what());
  }
  return parse_config(root);
}

void override_seed(ExperimentConfig& config, std::uint64_t seed) {
  config.seed = seed;
  finalize(config);
}

std::vector<SweepPoint> expand_sweep(const ExperimentConfig& base) {
  if (base.sweep.empty()) throw ConfigError("config error at $.sweep: no sweep axes given");
  // Missing axes contribute a single pass-through value.
  const std::vector<std::string> sets =
      base.sweep.boundary_set.empty() ? std::vector<std::string>{""} : base.sweep.boundary_set;
  const std::vector<double> cs =
      base.sweep.overshoot_c.empty() ? std::vector<double>{-1.0} : base.sweep.overshoot_c;
  const std::vector<Index> steps =
      base.sweep.n_steps.empty() ? std::vector<Index>{-1} : base.sweep.n_steps;

  std::vector<SweepPoint> points;
  for (const auto& set : sets)
    for (const double c : cs)
      for (const Index n : steps) {
        SweepPoint p;
        p.index = static_cast<Index>(points.size());
        p.config = base;
        p.config.sweep = SweepSection{};
        std::string label;
        if (!set.empty()) {
          p.config.model.boundary_set = set;
          label += set;
        }
        if (c >= 0.0) {
          for (auto& s : p.config.sampling.samplers)
            if (s.kind == "overshoot") s.overshoot_c = c;
          label += (label.empty() ? "" : "_") + ("c" + format_number(c));
        }
        if (n > 0) {
          p.config.sampling.n_steps = n;
          label += (label.empty() ? "" : "_") + ("steps" + std::to_string(n));
        }
        p.label = label.empty() ? "base" : label;
        p.config.name = base.name + "/" + p.label;
        p.config.seed = derive_seed(base.seed, "sweep", static_cast<std::uint64_t>(p.index));
        finalize(p.config);
        points.push_back(std::move(p));
      }
  return points;
}

}  // namespace brf
