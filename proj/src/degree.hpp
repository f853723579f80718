#pragma once
#include <cstddef>
#include <string>
#include <vector>

#include "model.hpp"

namespace ctbp {

// ---------------------------------------------------------------------------
// Raw birth-process occupancy: distribution and mean of the pure birth
// process driven by `w` after operational time u (aging and fitness enter
// through the choice of u).

// P(V_u = k) for k = 0..kmax; closed form for affine weights, otherwise the
// forward equations are integrated.
std::vector<double> birth_occupancy(const WeightSequence& w, double u,
                                    std::size_t kmax);

// E[V_u]; +inf when the mean diverges.
double birth_mean(const WeightSequence& w, double u);

// ---------------------------------------------------------------------------

enum class DegreeMethod {
  ClosedForm,        // explicit affine-weight expressions
  Quadrature,        // direct numerical integration
  ProductFormula,    // stationary product with per-degree correction factors
  Simulation
};

struct DegreeDistribution {
  std::vector<double> p;     // p[k] = P(degree = k)
  double tail_mass = 0.0;    // certified bound on the mass beyond p.size()-1
  DegreeMethod method = DegreeMethod::ClosedForm;
  double abs_tol = 0.0;      // per-entry numerical tolerance achieved
};

// Stationary (no aging, no fitness) limiting degree distribution at growth
// rate alpha.
DegreeDistribution stationary_pk(const WeightSequence& w, double alpha,
                                 std::size_t kmax);

// Stationary with bounded fitness: mixture over the fitness density.
DegreeDistribution stationary_fitness_pk(const WeightSequence& w,
                                         const FitnessDistribution& fit,
                                         double alpha, std::size_t kmax);

// Degree distribution of an age-t individual (cohort view) under the spec.
std::vector<double> cohort_pk(const ProcessSpec& spec, double t,
                              std::size_t kmax);

// Aging-only limiting distribution: direct quadrature route.
DegreeDistribution aging_pk(const ProcessSpec& spec, double alpha,
                            std::size_t kmax);

// Aging-only limiting distribution: stationary product times per-degree
// correction factors ("Laplace ratio" route).  Capped at moderate k; throws
// NumericsError when the ratio underflows.
double lhat(const ProcessSpec& spec, std::size_t k, double alpha);
DegreeDistribution aging_pk_product(const ProcessSpec& spec, double alpha,
                                    std::size_t kmax);

// Aging + smooth fitness density: two-dimensional quadrature route.
DegreeDistribution aging_fitness_pk(const ProcessSpec& spec, double alpha,
                                    std::size_t kmax);

// Exponential fitness closed forms (affine weights).
std::vector<double> expfit_cohort_pk(const ProcessSpec& spec, double t,
                                     std::size_t kmax);
std::vector<double> expfit_lifetime_pk(const ProcessSpec& spec,
                                       std::size_t kmax);
DegreeDistribution expfit_pk(const ProcessSpec& spec, double alpha,
                             std::size_t kmax);

// Power-law exponent of the cohort distribution at age t (exponential
// fitness, affine weights, integrable aging): 1 + theta / (a G(t)).
double dynamical_exponent(const ProcessSpec& spec, double t);

// Dispatching entry point used by the CLI: picks the best analytic route for
// the spec at growth rate alpha.
DegreeDistribution degree_distribution(const ProcessSpec& spec, double alpha,
                                       std::size_t kmax);

}  // namespace ctbp
