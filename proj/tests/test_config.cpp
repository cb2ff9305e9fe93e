#include <doctest.h>

#include <fstream>
#include <string>

#include <json.hpp>

#include "boundary_rf/rng.hpp"
#include "config.hpp"

using namespace brf;
using nlohmann::json;

namespace {

json minimal() {
  return json::parse(R"({
    "name": "toy",
    "seed": 7,
    "data": {"kind": "diagonal_gaussian", "mean": [0.0, 1.0], "var": [1.0, 4.0]},
    "model": {"kind": "vanilla"}
  })");
}

}  // namespace

TEST_CASE("minimal config parses and fills defaults") {
  const ExperimentConfig c = parse_config(minimal());
  CHECK(c.name == "toy");
  CHECK(c.seed == 7);
  CHECK(c.data.dim() == 2);
  CHECK(c.model.kind == "vanilla");
  CHECK(c.model.boundary_set == "standard_cosine");
  CHECK(c.model.hidden == std::vector<Index>{128, 128, 128});
  CHECK(c.training.steps == 2000);
  CHECK(c.training.batch_size == 256);
  CHECK(c.training.learning_rate == 1e-3);
  CHECK(c.training.time_sampler.kind == "uniform");
  REQUIRE(c.sampling.samplers.size() == 1);
  CHECK(c.sampling.samplers[0].kind == "euler");
  CHECK(c.eval.boundary_probes == 256);
  CHECK(c.sweep.empty());
  CHECK(c.digest.size() == 16);

  const auto data = c.data.make();
  CHECK(data->dim() == 2);
  CHECK(data->mean()(1) == 1.0);
  CHECK(data->covariance_trace() == 5.0);
}

TEST_CASE("mixture data config") {
  json j = minimal();
  j["data"] = json::parse(R"({
    "kind": "gaussian_mixture",
    "components": [
      {"mean": [2.0, 0.0], "stddev": 0.5, "weight": 1.0},
      {"mean": [-2.0, 0.0], "stddev": 0.5, "weight": 1.0}
    ]
  })");
  const ExperimentConfig c = parse_config(j);
  CHECK(c.data.dim() == 2);
  const auto data = c.data.make();
  CHECK(data->mean().isZero(1e-15));
  // Per-component isotropic var 0.25 plus the spread of the means.
  CHECK(data->covariance_trace() == doctest::Approx(0.5 + 4.0).epsilon(1e-12));
}

TEST_CASE("unknown keys are rejected with their path") {
  json j = minimal();
  j["extra_knob"] = 1;
  CHECK_THROWS_WITH_AS(parse_config(j), doctest::Contains("$.extra_knob"), ConfigError);

  j = minimal();
  j["model"]["widht"] = 7;
  CHECK_THROWS_WITH_AS(parse_config(j), doctest::Contains("$.model.widht"), ConfigError);

  j = minimal();
  j["training"]["time_sampler"] = {{"kind", "uniform"}, {"mode", 1}};
  CHECK_THROWS_WITH_AS(parse_config(j), doctest::Contains("$.training.time_sampler.mode"),
                       ConfigError);
}

TEST_CASE("missing and ill-typed values are rejected") {
  json j = minimal();
  j.erase("name");
  CHECK_THROWS_WITH_AS(parse_config(j), doctest::Contains("$.name"), ConfigError);

  j = minimal();
  j["seed"] = -3;
  CHECK_THROWS_WITH_AS(parse_config(j), doctest::Contains("$.seed"), ConfigError);

  j = minimal();
  j["seed"] = "42";
  CHECK_THROWS_AS(parse_config(j), ConfigError);

  j = minimal();
  j["data"]["var"] = {1.0, -4.0};
  CHECK_THROWS_WITH_AS(parse_config(j), doctest::Contains("$.data.var"), ConfigError);

  j = minimal();
  j["data"]["mean"] = {0.0};
  CHECK_THROWS_AS(parse_config(j), ConfigError);  // length mismatch with var

  j = minimal();
  j["model"]["kind"] = "transformer";
  CHECK_THROWS_WITH_AS(parse_config(j), doctest::Contains("$.model.kind"), ConfigError);

  j = minimal();
  j["model"]["boundary_set"] = "cubic";
  CHECK_THROWS_WITH_AS(parse_config(j), doctest::Contains("$.model.boundary_set"), ConfigError);

  j = minimal();
  j["training"] = {{"learning_rate", 0.0}};
  CHECK_THROWS_WITH_AS(parse_config(j), doctest::Contains("$.training.learning_rate"), ConfigError);

  j = minimal();
  j["sampling"] = json::parse(R"({"samplers": [{"kind": "heun"}]})");
  CHECK_THROWS_WITH_AS(parse_config(j), doctest::Contains("$.sampling.samplers[0].kind"),
                       ConfigError);

  j = minimal();
  j["sampling"] = json::parse(R"({"samplers": [{"kind": "euler"}, {"kind": "euler"}]})");
  CHECK_THROWS_WITH_AS(parse_config(j), doctest::Contains("duplicate"), ConfigError);
}

TEST_CASE("sampler labels are stable identifiers") {
  json j = minimal();
  j["sampling"] = json::parse(R"({
    "samplers": [
      {"kind": "euler"},
      {"kind": "curved_euler"},
      {"kind": "langevin", "sigma_kind": "triangular", "sigma0": 0.5},
      {"kind": "langevin", "sigma_kind": "constant", "sigma0": 0.25},
      {"kind": "overshoot", "c": 1.0},
      {"kind": "overshoot", "c": 2.5}
    ]
  })");
  const ExperimentConfig c = parse_config(j);
  REQUIRE(c.sampling.samplers.size() == 6);
  CHECK(c.sampling.samplers[0].label() == "euler");
  CHECK(c.sampling.samplers[1].label() == "curved_euler");
  CHECK(c.sampling.samplers[2].label() == "langevin_triangular_0.5");
  CHECK(c.sampling.samplers[3].label() == "langevin_constant_0.25");
  CHECK(c.sampling.samplers[4].label() == "overshoot_c1");
  CHECK(c.sampling.samplers[5].label() == "overshoot_c2.5");

  CHECK(c.sampling.samplers[2].sigma()(0.5) == doctest::Approx(0.125).epsilon(1e-15));
  CHECK(c.sampling.samplers[3].sigma()(0.9) == 0.25);
}

TEST_CASE("digest ignores formatting but tracks content") {
  const std::string spaced = R"({
    "seed": 7,
    "name": "toy",
    "model": {"kind": "vanilla"},
    "data": {"var": [1.0, 4.0], "kind": "diagonal_gaussian", "mean": [0.0, 1.0]}
  })";
  const ExperimentConfig a = parse_config(minimal());
  const ExperimentConfig b = parse_config(json::parse(spaced));
  CHECK(a.digest == b.digest);

  json changed = minimal();
  changed["training"] = {{"steps", 2001}};
  CHECK(parse_config(changed).digest != a.digest);

  // Explicitly restating a default value changes nothing.
  json restated = minimal();
  restated["training"] = {{"steps", 2000}};
  CHECK(parse_config(restated).digest == a.digest);
}

TEST_CASE("override_seed refreshes the digest") {
  ExperimentConfig c = parse_config(minimal());
  const std::string before = c.digest;
  override_seed(c, 1234);
  CHECK(c.seed == 1234);
  CHECK(c.digest != before);
  CHECK(c.canonical["seed"] == 1234);
}

TEST_CASE("sweep expansion is a labelled cross product") {
  json j = minimal();
  j["sampling"] = json::parse(R"({"samplers": [{"kind": "euler"}, {"kind": "overshoot", "c": 1.0}]})");
  j["sweep"] = json::parse(R"({
    "boundary_set": ["standard_cosine", "linear"],
    "overshoot_c": [0.0, 2.0],
    "n_steps": [50]
  })");
  const ExperimentConfig base = parse_config(j);
  const auto points = expand_sweep(base);
  REQUIRE(points.size() == 4);

  CHECK(points[0].label == "standard_cosine_c0_steps50");
  CHECK(points[1].label == "standard_cosine_c2_steps50");
  CHECK(points[2].label == "linear_c0_steps50");
  CHECK(points[3].label == "linear_c2_steps50");

  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& p = points[i];
    CHECK(p.index == static_cast<Index>(i));
    CHECK(p.config.name == "toy/" + p.label);
    CHECK(p.config.sweep.empty());
    CHECK(p.config.seed == derive_seed(base.seed, "sweep", i));
    CHECK(p.config.sampling.n_steps == 50);
  }
  CHECK(points[2].config.model.boundary_set == "linear");
  // The c axis touches only the overshoot sampler.
  CHECK(points[1].config.sampling.samplers[1].overshoot_c == 2.0);
  CHECK(points[1].config.sampling.samplers[0].kind == "euler");

  // Children with distinct settings digest differently.
  CHECK(points[0].config.digest != points[1].config.digest);

  json no_sweep = minimal();
  CHECK_THROWS_AS(expand_sweep(parse_config(no_sweep)), ConfigError);
}

TEST_CASE("single-axis sweep labels omit the silent axes") {
  json j = minimal();
  j["sweep"] = json::parse(R"({"boundary_set": ["quadratic"]})");
  const auto points = expand_sweep(parse_config(j));
  REQUIRE(points.size() == 1);
  CHECK(points[0].label == "quadratic");
  CHECK(points[0].config.model.boundary_set == "quadratic");
}

TEST_CASE("load_config reports file problems") {
  CHECK_THROWS_AS(load_config("/does/not/exist.json"), ConfigError);

  const auto path = std::filesystem::temp_directory_path() / "brf_bad_config.json";
  std::ofstream(path) << "{ not json";
  CHECK_THROWS_AS(load_config(path), ConfigError);
  std::filesystem::remove(path);
}
