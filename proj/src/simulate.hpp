#pragma once
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "degree.hpp"
#include "malthus.hpp"
#include "model.hpp"

namespace ctbp {

// Exact event-driven simulation of the branching tree.  An individual with
// fitness Y and k children reproduces at rate Y * f_k * g(age); gaps are
// exponential in the transformed clock Y * G(age), so the next birth age is
// obtained by inverting G -- no thinning, no discretisation error.

struct SimulationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Individual {
  std::int64_t parent = -1;  // -1 marks the root
  double birth_time = 0.0;
  double fitness = 1.0;
  std::uint32_t children = 0;
};

struct Population {
  struct Event {
    double time;
    std::int64_t parent;
    // The child born by event j is individual j + 1.
  };
  std::vector<Individual> individuals;
  std::vector<Event> event_log;  // times non-decreasing
  double clock = 0.0;
  std::uint64_t seed = 0;
  bool explosion_flag = false;
};

struct StopRule {
  std::size_t max_population = 0;      // 0 = unbounded
  double max_time = kInf;
  std::size_t max_events = 10'000'000; // hard cap on births
};

struct SimulationSummary {
  std::size_t final_size = 0;
  double final_time = 0.0;
  std::vector<std::size_t> degree_histogram;
  double growth_rate_estimate = 0.0;  // NaN when not estimable
  bool explosion_flag = false;
};

struct CohortExponent {
  double tau = 0.0;           // primary estimate: log-log fit of the CCDF
  double tau_histogram = 0.0; // log-log fit of the histogram for k >= 10
  double tau_hill = 0.0;      // Hill estimator above the same cutoff
  std::size_t cohort_size = 0;
};

// Age at which the next child arrives for an individual with fitness Y and
// k children at the given age, driven by a unit-exponential draw e; empty
// when the remaining aging budget is exhausted (no further child, ever).
std::optional<double> next_birth_age(const WeightSequence& w,
                                     const AgingFunction& ag, double Y,
                                     std::size_t k, double age, double e);

// Run the process from a single root until a stop rule fires.  Deterministic
// given (spec, stop, seed); the explosion flag is set when the event cap is
// hit while the clock has all but stopped advancing.
Population run(const ProcessSpec& spec, const StopRule& stop,
               std::uint64_t seed);

// Fraction of individuals born by time t with k children at time t,
// reconstructed exactly from the event log.
DegreeDistribution empirical_pk(const Population& pop, double t);

// Least-squares slope of log population size over the last half of the
// simulated time range.  Throws RegimeError for explosive populations.
double growth_rate(const Population& pop);

// Tail exponent of the children counts at the given age among individuals
// born inside [cohort_lo, cohort_hi].  Requires at least 10^4 uncensored
// cohort members.
CohortExponent cohort_exponent(const Population& pop, double cohort_lo,
                               double cohort_hi, double age);

SimulationSummary summarize(const Population& pop);

}  // namespace ctbp
