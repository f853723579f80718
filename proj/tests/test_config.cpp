#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <string>

#include "../src/config.hpp"

using namespace ctbp;

TEST_CASE("empty config yields documented defaults") {
  RunConfig cfg = parse_config("{}");
  CHECK(cfg.spec.weights.is_affine());
  CHECK(cfg.spec.weights.a == doctest::Approx(1.0));
  CHECK(cfg.spec.weights.b == doctest::Approx(1.0));
  CHECK(cfg.spec.aging.G_inf() == std::numeric_limits<double>::infinity());
  CHECK(cfg.spec.fitness.is_degenerate_one());
  CHECK(cfg.kmax == 100);
  CHECK(cfg.seed == 1);
  CHECK(cfg.tolerance == doctest::Approx(1e-8));
  CHECK(cfg.stop.max_events == 10'000'000);
  CHECK(cfg.stop.max_population == 0);
  CHECK(std::isinf(cfg.stop.max_time));
}

TEST_CASE("full config round-trips every field") {
  std::string text = R"({
    "command": "simulate",
    "kmax": 250,
    "seed": 99,
    "tolerance": 1e-10,
    "out": "runs",
    "stop": {"max_population": 100000, "max_time": 12.5, "max_events": 500000},
    "spec": {
      "weights": {"family": "affine", "a": 1.0, "b": 3.1567},
      "aging": {"family": "lognormal", "l1": 1.0, "l2": 2.0, "l3": 0.5},
      "fitness": {"family": "exponential", "theta": 2.3866}
    }
  })";
  RunConfig cfg = parse_config(text);
  CHECK(cfg.command == "simulate");
  CHECK(cfg.kmax == 250);
  CHECK(cfg.seed == 99);
  CHECK(cfg.tolerance == doctest::Approx(1e-10));
  CHECK(cfg.out == "runs");
  CHECK(cfg.stop.max_population == 100000);
  CHECK(cfg.stop.max_time == doctest::Approx(12.5));
  CHECK(cfg.stop.max_events == 500000);
  CHECK(cfg.spec.weights.b == doctest::Approx(3.1567));
  CHECK(cfg.spec.aging.integrable());
  CHECK(cfg.spec.fitness.theta() == doctest::Approx(2.3866));
}

TEST_CASE("unknown keys are rejected with the offending path") {
  CHECK_THROWS_WITH_AS(parse_config(R"({"sede": 3})"),
                       doctest::Contains("config.sede"), ConfigError);
  CHECK_THROWS_WITH_AS(
      parse_config(R"({"spec": {"weights": {"family": "affine", "aa": 1}}})"),
      doctest::Contains("spec.weights.aa"), ConfigError);
  CHECK_THROWS_WITH_AS(
      parse_config(R"({"stop": {"max_steps": 5}})"),
      doctest::Contains("stop.max_steps"), ConfigError);
}

TEST_CASE("model-level validation surfaces through config errors") {
  CHECK_THROWS_AS(
      parse_spec(R"({"aging": {"family": "power", "lambda": 0.5}})"),
      ConfigError);
  try {
    parse_spec(R"({"aging": {"family": "power", "lambda": 0.5}})");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("lambda > 1") != std::string::npos);
  }
  CHECK_THROWS_AS(
      parse_spec(R"({"fitness": {"family": "pareto", "alpha": -1}})"),
      ConfigError);
}

TEST_CASE("malformed documents are rejected") {
  CHECK_THROWS_AS(parse_config("not json"), ConfigError);
  CHECK_THROWS_AS(parse_config("[1,2,3]"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"kmax": -5})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"command": "explode"})"), ConfigError);
  CHECK_THROWS_AS(
      parse_spec(R"({"weights": {"family": "geometric"}})"), ConfigError);
  CHECK_THROWS_AS(
      parse_spec(R"({"fitness": {"family": "exponential"}})"), ConfigError);
}

TEST_CASE("custom weight tables parse into custom sequences") {
  ProcessSpec spec = parse_spec(R"({
    "weights": {"family": "custom", "table": [0.5, 1.5, 2.5],
                "tail_a": 1.0, "tail_b": 1.0}
  })");
  CHECK_FALSE(spec.weights.is_affine());
  CHECK(spec.weights(0) == doctest::Approx(0.5));
  CHECK(spec.weights(2) == doctest::Approx(2.5));
  CHECK(spec.weights(10) == doctest::Approx(11.0));
}
