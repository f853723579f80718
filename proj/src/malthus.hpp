#pragma once
#include <stdexcept>
#include <string>

#include "model.hpp"

namespace ctbp {

enum class Regime { Supercritical, Subcritical, Explosive };

struct Verdict {
  Regime regime = Regime::Supercritical;
  double limit_mean_offspring = 0.0;  // may be +inf
  std::string reason;
};

// Typed refusal carrying the classification that blocked the computation.
struct RegimeError : std::runtime_error {
  Verdict verdict;
  RegimeError(const Verdict& v, const std::string& msg)
      : std::runtime_error(msg), verdict(v) {}
};

struct MalthusianResult {
  double alpha = 0.0;        // exponential growth rate of the population
  double residual = 0.0;     // |L(alpha) - 1| at the returned root
  double derivative = 0.0;   // dL/dalpha at the root (negative)
  double alpha_floor = 0.0;  // infimum of the finite-transform domain
  Verdict verdict;
};

// E[size of the raw birth process at an Exp(alpha) time]; +inf below the
// domain edge.  `w` alone, no aging or fitness.
double stationary_laplace(const WeightSequence& w, double alpha);

// Mean number of children of an age-t individual under the full spec.
double mean_offspring_at(const ProcessSpec& spec, double t);

// E[number of children at an Exp(alpha) time] under the full spec.
double process_laplace(const ProcessSpec& spec, double alpha);

Verdict supercriticality(const ProcessSpec& spec);

// Root of process_laplace(alpha) = 1.  Throws RegimeError when the spec is
// explosive or subcritical.
MalthusianResult malthusian(const ProcessSpec& spec);

}  // namespace ctbp
