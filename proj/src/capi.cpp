#include "../include/ctbp/ctbp.h"

#include <cmath>
#include <cstring>
#include <limits>
#include <numeric>
#include <string>

#include "asymptotics.hpp"
#include "config.hpp"
#include "degree.hpp"
#include "malthus.hpp"
#include "model.hpp"
#include "numerics.hpp"
#include "simulate.hpp"
#include "validate.hpp"

struct ctbp_spec {
  ctbp::ProcessSpec spec;
};

struct ctbp_population {
  ctbp::Population pop;
};

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

thread_local std::string g_last_error;

int regime_code(ctbp::Regime r) {
  switch (r) {
    case ctbp::Regime::Supercritical:
      return CTBP_REGIME_SUPERCRITICAL;
    case ctbp::Regime::Subcritical:
      return CTBP_REGIME_SUBCRITICAL;
    case ctbp::Regime::Explosive:
      return CTBP_REGIME_EXPLOSIVE;
  }
  return CTBP_REGIME_SUPERCRITICAL;
}

// Runs `f`, translating the library's typed exceptions into status codes.
template <typename F>
int guarded(F&& f) {
  try {
    f();
    return CTBP_OK;
  } catch (const ctbp::RegimeError& e) {
    g_last_error = e.what();
    switch (e.verdict.regime) {
      case ctbp::Regime::Explosive:
        return CTBP_ERROR_EXPLOSIVE;
      case ctbp::Regime::Subcritical:
        return CTBP_ERROR_SUBCRITICAL;
      default:
        return CTBP_ERROR;
    }
  } catch (const ctbp::ConfigError& e) {
    g_last_error = e.what();
    return CTBP_ERROR_CONFIG;
  } catch (const ctbp::num::NumericsError& e) {
    g_last_error = e.what();
    return CTBP_ERROR_NUMERIC;
  } catch (const ctbp::SaddleError& e) {
    g_last_error = e.what();
    return CTBP_ERROR_NUMERIC;
  } catch (const std::invalid_argument& e) {
    g_last_error = e.what();
    return CTBP_ERROR_CONFIG;
  } catch (const std::domain_error& e) {
    g_last_error = e.what();
    return CTBP_ERROR_CONFIG;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return CTBP_ERROR;
  }
}

int null_arg(const char* name) {
  g_last_error = std::string("null argument: ") + name;
  return CTBP_ERROR_CONFIG;
}

void store(double* slot, double value) {
  if (slot) *slot = value;
}

}  // namespace

extern "C" {

const char* ctbp_last_error(void) { return g_last_error.c_str(); }

int ctbp_spec_parse(const char* json_text, ctbp_spec** out) {
  if (!json_text) return null_arg("json_text");
  if (!out) return null_arg("out");
  return guarded([&] {
    *out = new ctbp_spec{ctbp::parse_spec(json_text)};
  });
}

void ctbp_spec_free(ctbp_spec* spec) { delete spec; }

int ctbp_malthusian(const ctbp_spec* spec, double* alpha, double* residual) {
  if (!spec) return null_arg("spec");
  if (!alpha) return null_arg("alpha");
  return guarded([&] {
    ctbp::MalthusianResult r = ctbp::malthusian(spec->spec);
    *alpha = r.alpha;
    store(residual, r.residual);
  });
}

int ctbp_supercriticality(const ctbp_spec* spec, int* regime,
                          double* limit_mean) {
  if (!spec) return null_arg("spec");
  if (!regime) return null_arg("regime");
  return guarded([&] {
    ctbp::Verdict v = ctbp::supercriticality(spec->spec);
    *regime = regime_code(v.regime);
    store(limit_mean, v.limit_mean_offspring);
  });
}

int ctbp_degree_distribution(const ctbp_spec* spec, double alpha,
                             size_t kmax, double* p, double* tail_mass,
                             int* method) {
  if (!spec) return null_arg("spec");
  if (!p) return null_arg("p");
  return guarded([&] {
    double a = std::isfinite(alpha) ? alpha
                                    : ctbp::malthusian(spec->spec).alpha;
    ctbp::DegreeDistribution d =
        ctbp::degree_distribution(spec->spec, a, kmax);
    for (size_t k = 0; k <= kmax; ++k)
      p[k] = k < d.p.size() ? d.p[k] : 0.0;
    store(tail_mass, d.tail_mass);
    if (method) *method = static_cast<int>(d.method);
  });
}

int ctbp_saddle(const ctbp_spec* spec, size_t k, double* t_k, double* s_k,
                double* psi_value, double* curvature, double* det_hessian,
                double* log_pk) {
  if (!spec) return null_arg("spec");
  return guarded([&] {
    if (spec->spec.fitness.is_degenerate_one()) {
      ctbp::Saddle1D s = ctbp::saddle_age(spec->spec, k);
      store(t_k, s.t_k);
      store(s_k, kNaN);
      store(psi_value, s.psi_value);
      store(curvature, s.second_deriv);
      store(det_hessian, kNaN);
      store(log_pk, ctbp::log_asymptotic_pk_age(
                        spec->spec, ctbp::malthusian(spec->spec).alpha, k));
    } else {
      ctbp::Saddle2D s = ctbp::saddle_age_fitness(spec->spec, k);
      store(t_k, s.t_k);
      store(s_k, s.s_k);
      store(psi_value, s.psi_value);
      store(curvature, kNaN);
      store(det_hessian, s.determinant);
      store(log_pk,
            ctbp::log_asymptotic_pk_age_fitness(
                spec->spec, ctbp::malthusian(spec->spec).alpha, k));
    }
  });
}

int ctbp_predicted_tail(const ctbp_spec* spec, int* tail_class,
                        double* exponent, double* log_power,
                        double* stretch_power, double* stretch_rate,
                        double* truncation_rate) {
  if (!spec) return null_arg("spec");
  return guarded([&] {
    ctbp::TailPrediction t = ctbp::predicted_tail(spec->spec);
    if (tail_class) *tail_class = static_cast<int>(t.tail_class);
    store(exponent, t.exponent);
    store(log_power, t.log_power);
    store(stretch_power, t.stretch_power);
    store(stretch_rate, t.stretch_rate);
    store(truncation_rate, t.truncation_rate);
  });
}

int ctbp_simulate(const ctbp_spec* spec, uint64_t seed,
                  size_t max_population, double max_time, size_t max_events,
                  ctbp_population** out) {
  if (!spec) return null_arg("spec");
  if (!out) return null_arg("out");
  return guarded([&] {
    ctbp::StopRule stop;
    stop.max_population = max_population;
    stop.max_time = std::isnan(max_time)
                        ? std::numeric_limits<double>::infinity()
                        : max_time;
    if (max_events) stop.max_events = max_events;
    *out = new ctbp_population{ctbp::run(spec->spec, stop, seed)};
  });
}

void ctbp_population_free(ctbp_population* pop) { delete pop; }

size_t ctbp_population_size(const ctbp_population* pop) {
  return pop ? pop->pop.individuals.size() : 0;
}

double ctbp_population_clock(const ctbp_population* pop) {
  return pop ? pop->pop.clock : kNaN;
}

int ctbp_population_explosive(const ctbp_population* pop) {
  return pop && pop->pop.explosion_flag ? 1 : 0;
}

size_t ctbp_population_events(const ctbp_population* pop) {
  return pop ? pop->pop.event_log.size() : 0;
}

int ctbp_population_event(const ctbp_population* pop, size_t i, double* time,
                          int64_t* parent, int64_t* child,
                          double* child_fitness) {
  if (!pop) return null_arg("pop");
  if (i >= pop->pop.event_log.size()) {
    g_last_error = "event index out of range";
    return CTBP_ERROR_CONFIG;
  }
  // Event i records the birth of individual i + 1 (the root is 0).
  store(time, pop->pop.event_log[i].time);
  if (parent) *parent = pop->pop.event_log[i].parent;
  if (child) *child = static_cast<int64_t>(i) + 1;
  store(child_fitness, pop->pop.individuals[i + 1].fitness);
  return CTBP_OK;
}

int ctbp_growth_rate(const ctbp_population* pop, double* rate) {
  if (!pop) return null_arg("pop");
  if (!rate) return null_arg("rate");
  return guarded([&] { *rate = ctbp::growth_rate(pop->pop); });
}

int ctbp_empirical_pk(const ctbp_population* pop, double time, size_t kmax,
                      double* p, double* tail_mass) {
  if (!pop) return null_arg("pop");
  if (!p) return null_arg("p");
  return guarded([&] {
    ctbp::DegreeDistribution d = ctbp::empirical_pk(pop->pop, time);
    double beyond = 0.0;
    for (size_t k = 0; k < d.p.size(); ++k) {
      if (k <= kmax)
        p[k] = d.p[k];
      else
        beyond += d.p[k];
    }
    for (size_t k = d.p.size(); k <= kmax; ++k) p[k] = 0.0;
    store(tail_mass, d.tail_mass + beyond);
  });
}

int ctbp_cohort_exponent(const ctbp_population* pop, double cohort_lo,
                         double cohort_hi, double age, double* tau,
                         double* tau_histogram, double* tau_hill,
                         size_t* cohort_size) {
  if (!pop) return null_arg("pop");
  return guarded([&] {
    ctbp::CohortExponent c =
        ctbp::cohort_exponent(pop->pop, cohort_lo, cohort_hi, age);
    store(tau, c.tau);
    store(tau_histogram, c.tau_histogram);
    store(tau_hill, c.tau_hill);
    if (cohort_size) *cohort_size = c.cohort_size;
  });
}

int ctbp_validate(const ctbp_spec* spec, uint64_t seed, size_t kmax,
                  char** json_report, int* pass) {
  if (!spec) return null_arg("spec");
  return guarded([&] {
    ctbp::ValidationReport report =
        ctbp::validate_spec(spec->spec, seed, kmax);
    if (json_report) {
      std::string text = ctbp::report_json(report);
      *json_report = new char[text.size() + 1];
      std::memcpy(*json_report, text.c_str(), text.size() + 1);
    }
    if (pass) *pass = report.all_pass() ? 1 : 0;
  });
}

void ctbp_string_free(char* s) { delete[] s; }

}  // extern "C"
