#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "../src/malthus.hpp"
#include "../src/validate.hpp"

using namespace ctbp;

TEST_CASE("stationary affine spec passes every applicable check") {
  ProcessSpec spec;  // affine(1,1), constant aging, degenerate fitness
  ValidationReport report = validate_spec(spec, 7, 60);
  for (const auto& c : report.checks) {
    INFO(c.name, " residual=", c.residual, " tol=", c.tolerance);
    CHECK(c.pass);
  }
  CHECK(report.all_pass());
  CHECK(report.checks.size() >= 5);
}

TEST_CASE("aging plus exponential fitness reference spec passes") {
  ProcessSpec spec;
  spec.aging = AgingFunction::exponential(1.0);
  spec.fitness = FitnessDistribution::exponential(1.5);
  ValidationReport report = validate_spec(spec, 7, 60);
  for (const auto& c : report.checks) {
    INFO(c.name, " residual=", c.residual, " tol=", c.tolerance);
    CHECK(c.pass);
  }
  CHECK(report.checks.size() >= 7);
}

TEST_CASE("report serialises with one entry per check") {
  ProcessSpec spec;
  ValidationReport report = validate_spec(spec, 7, 40);
  std::string json = report_json(report);
  for (const auto& c : report.checks)
    CHECK(json.find(c.name) != std::string::npos);
  CHECK(json.find("\"pass\"") != std::string::npos);
}

TEST_CASE("specs without a growth rate are refused outright") {
  ProcessSpec spec;
  spec.aging = AgingFunction::exponential(1.0);
  spec.fitness = FitnessDistribution::pareto(2.0);
  CHECK_THROWS_AS(validate_spec(spec, 1, 40), RegimeError);
}
