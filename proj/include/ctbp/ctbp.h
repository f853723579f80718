/* C interface to the branching-process library: preferential attachment
 * trees with aging and fitness.  All entry points return a status code;
 * on failure the message is available via ctbp_last_error() (thread-local).
 * Objects returned through out-parameters are owned by the caller and must
 * be released with the matching *_free function. */
#ifndef CTBP_H
#define CTBP_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes. */
enum {
  CTBP_OK = 0,
  CTBP_ERROR = 1,             /* uncategorised failure */
  CTBP_ERROR_CONFIG = 2,      /* malformed spec / invalid parameters */
  CTBP_ERROR_EXPLOSIVE = 3,   /* spec produces infinitely many births */
  CTBP_ERROR_SUBCRITICAL = 4, /* mean offspring too small for growth */
  CTBP_ERROR_NUMERIC = 5      /* quadrature / root-finding / saddle failure */
};

/* Regime classification (ctbp_supercriticality). */
enum {
  CTBP_REGIME_SUPERCRITICAL = 0,
  CTBP_REGIME_SUBCRITICAL = 1,
  CTBP_REGIME_EXPLOSIVE = 2
};

/* Analytic route used for a degree distribution. */
enum {
  CTBP_METHOD_CLOSED_FORM = 0,
  CTBP_METHOD_QUADRATURE = 1,
  CTBP_METHOD_PRODUCT_FORMULA = 2,
  CTBP_METHOD_SIMULATION = 3
};

/* Predicted tail class of the limiting degree distribution. */
enum {
  CTBP_TAIL_EXPLOSIVE = 0,
  CTBP_TAIL_POWER_LAW = 1,
  CTBP_TAIL_STRETCHED_EXPONENTIAL = 2,
  CTBP_TAIL_EXPONENTIAL_TRUNCATION = 3
};

typedef struct ctbp_spec ctbp_spec;
typedef struct ctbp_population ctbp_population;

/* Message from the most recent failing call on this thread. */
const char* ctbp_last_error(void);

/* --- spec ------------------------------------------------------------- */

/* Parses a JSON process description: {"weights": {...}, "aging": {...},
 * "fitness": {...}}; absent blocks default to affine(1,1) weights, constant
 * aging and unit fitness. */
int ctbp_spec_parse(const char* json_text, ctbp_spec** out);
void ctbp_spec_free(ctbp_spec* spec);

/* --- analytics -------------------------------------------------------- */

/* Population growth rate: unique root of the offspring transform.
 * residual may be NULL. */
int ctbp_malthusian(const ctbp_spec* spec, double* alpha, double* residual);

/* Regime trichotomy; limit_mean (may be NULL) receives the limiting mean
 * number of offspring (possibly +inf). */
int ctbp_supercriticality(const ctbp_spec* spec, int* regime,
                          double* limit_mean);

/* Limiting degree distribution p_0..p_kmax at growth rate alpha (pass a
 * non-finite alpha to have it computed).  p must hold kmax+1 doubles;
 * tail_mass and method may be NULL. */
int ctbp_degree_distribution(const ctbp_spec* spec, double alpha,
                             size_t kmax, double* p, double* tail_mass,
                             int* method);

/* Saddle-point approximation of log p_k.  For unit fitness the saddle is
 * one-dimensional: s_k and det_hessian are set to NaN and curvature carries
 * the scaled second derivative.  Any out-parameter may be NULL. */
int ctbp_saddle(const ctbp_spec* spec, size_t k, double* t_k, double* s_k,
                double* psi_value, double* curvature, double* det_hessian,
                double* log_pk);

/* Tail classification driven by the fitness distribution.  Parameters not
 * applicable to the class are set to NaN.  Any out-parameter may be NULL. */
int ctbp_predicted_tail(const ctbp_spec* spec, int* tail_class,
                        double* exponent, double* log_power,
                        double* stretch_power, double* stretch_rate,
                        double* truncation_rate);

/* --- simulation ------------------------------------------------------- */

/* Exact event-driven simulation from a single root.  max_population = 0
 * means unbounded; max_time may be +inf; max_events = 0 selects the default
 * cap of ten million events. */
int ctbp_simulate(const ctbp_spec* spec, uint64_t seed,
                  size_t max_population, double max_time, size_t max_events,
                  ctbp_population** out);
void ctbp_population_free(ctbp_population* pop);

size_t ctbp_population_size(const ctbp_population* pop);
double ctbp_population_clock(const ctbp_population* pop);
/* Nonzero when the run tripped the finite-time-accumulation detector. */
int ctbp_population_explosive(const ctbp_population* pop);
size_t ctbp_population_events(const ctbp_population* pop);
/* Event i (0-based, time-ordered): the birth of individual `child` to
 * `parent`.  Any out-parameter may be NULL. */
int ctbp_population_event(const ctbp_population* pop, size_t i, double* time,
                          int64_t* parent, int64_t* child,
                          double* child_fitness);

/* Least-squares exponential growth-rate estimate over the late half of the
 * run.  Fails with CTBP_ERROR_EXPLOSIVE on explosive runs. */
int ctbp_growth_rate(const ctbp_population* pop, double* rate);

/* Empirical degree distribution of the population alive at `time` (must not
 * exceed the final clock).  p must hold kmax+1 doubles. */
int ctbp_empirical_pk(const ctbp_population* pop, double time, size_t kmax,
                      double* p, double* tail_mass);

/* Power-law exponent fitted to the degrees, at the given age, of the cohort
 * born in [cohort_lo, cohort_hi].  tau is the complementary-cdf regression
 * estimate; tau_histogram / tau_hill are cross-checks.  Any out-parameter
 * may be NULL. */
int ctbp_cohort_exponent(const ctbp_population* pop, double cohort_lo,
                         double cohort_hi, double age, double* tau,
                         double* tau_histogram, double* tau_hill,
                         size_t* cohort_size);

/* --- validation ------------------------------------------------------- */

/* Runs the cross-module oracle suite and returns a JSON report (release
 * with ctbp_string_free).  pass receives 1 if every residual is within its
 * tolerance.  Either out-parameter may be NULL. */
int ctbp_validate(const ctbp_spec* spec, uint64_t seed, size_t kmax,
                  char** json_report, int* pass);
void ctbp_string_free(char* s);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* CTBP_H */
