#include "validate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "degree.hpp"
#include "malthus.hpp"
#include "simulate.hpp"

namespace ctbp {

namespace {

void push(ValidationReport& report, const std::string& name, double residual,
          double tolerance) {
  report.checks.push_back(
      {name, residual, tolerance, std::isfinite(residual) && residual <= tolerance});
}

double tv_distance(const std::vector<double>& p, const std::vector<double>& q,
                   std::size_t kmax) {
  double tv = 0.0;
  for (std::size_t k = 0; k <= kmax; ++k) {
    double a = k < p.size() ? p[k] : 0.0;
    double b = k < q.size() ? q[k] : 0.0;
    tv += std::abs(a - b);
  }
  return 0.5 * tv;
}

// Simulations started from a single root die out with positive probability
// even in the supercritical regime; scan seeds until one run survives.
Population grow_until(const ProcessSpec& spec, const StopRule& stop,
                      std::uint64_t first_seed, std::size_t min_size) {
  for (std::uint64_t s = first_seed; s < first_seed + 64; ++s) {
    Population pop = run(spec, stop, s);
    if (pop.individuals.size() >= min_size) return pop;
  }
  throw SimulationError("no surviving run in 64 seeds");
}

}  // namespace

bool ValidationReport::all_pass() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const OracleCheck& c) { return c.pass; });
}

ValidationReport validate_spec(const ProcessSpec& spec, std::uint64_t seed,
                               std::size_t kmax) {
  ValidationReport report;
  MalthusianResult mr = malthusian(spec);  // RegimeError propagates
  double alpha = mr.alpha;

  push(report, "malthusian fixed-point residual",
       std::abs(process_laplace(spec, alpha) - 1.0), 1e-10);

  if (spec.weights.is_affine()) {
    // Doubling every birth rate halves the clock: the stationary transform
    // at alpha must equal the original transform at alpha/2.
    // Evaluate away from the transform's divergence edge (rate > u * a).
    WeightSequence doubled =
        WeightSequence::affine(2.0 * spec.weights.a, 2.0 * spec.weights.b);
    double rate = 2.0 * (alpha + spec.weights.a);
    push(report, "rate-scaling identity of the stationary transform",
         std::abs(stationary_laplace(doubled, rate) -
                  stationary_laplace(spec.weights, rate / 2.0)),
         1e-9);
  }

  DegreeDistribution dist = degree_distribution(spec, alpha, kmax);
  double mass = std::accumulate(dist.p.begin(), dist.p.end(), 0.0);
  push(report, "degree distribution normalisation",
       std::abs(mass + dist.tail_mass - 1.0), 1e-6);

  if (spec.weights.is_affine() && spec.aging.integrable()) {
    ProcessSpec plain{spec.weights, spec.aging,
                      FitnessDistribution::degenerate(1.0)};
    double alpha_plain =
        spec.fitness.is_degenerate_one() ? alpha : malthusian(plain).alpha;
    DegreeDistribution quad = aging_pk(plain, alpha_plain, 20);
    DegreeDistribution prod = aging_pk_product(plain, alpha_plain, 20);
    double worst = 0.0;
    for (std::size_t k = 0; k <= 20; ++k)
      worst = std::max(worst, std::abs(quad.p[k] - prod.p[k]));
    push(report, "aging product formula vs direct quadrature", worst, 1e-6);
  }

  if (spec.weights.is_affine() && spec.aging.integrable() &&
      spec.fitness.family() == FitnessFamily::Exponential) {
    DegreeDistribution closed = expfit_pk(spec, alpha, 15);
    DegreeDistribution quad2d = aging_fitness_pk(spec, alpha, 15);
    double worst = 0.0;
    for (std::size_t k = 0; k <= 15; ++k)
      worst = std::max(worst, std::abs(closed.p[k] - quad2d.p[k]));
    push(report, "exponential-fitness closed form vs 2-d quadrature", worst,
         1e-6);
  }

  StopRule stop;
  stop.max_population = 200'000;
  stop.max_events = 400'000;
  Population pop = grow_until(spec, stop, seed, 50'000);
  DegreeDistribution emp = empirical_pk(pop, pop.clock);
  push(report, "simulated vs analytic degree distribution (TV, k<=30)",
       tv_distance(emp.p, dist.p, std::min<std::size_t>(kmax, 30)), 0.02);
  push(report, "simulated growth rate vs Malthusian parameter",
       std::abs(growth_rate(pop) / alpha - 1.0), 0.10);

  return report;
}

std::string report_json(const ValidationReport& report) {
  nlohmann::json doc;
  doc["pass"] = report.all_pass();
  doc["checks"] = nlohmann::json::array();
  for (const auto& c : report.checks)
    doc["checks"].push_back({{"name", c.name},
                             {"residual", c.residual},
                             {"tolerance", c.tolerance},
                             {"pass", c.pass}});
  return doc.dump(2);
}

}  // namespace ctbp
