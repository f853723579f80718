#pragma once
#include <functional>
#include <stdexcept>
#include <string>

namespace ctbp::num {

struct NumericsError : std::runtime_error {
  double best_estimate;
  NumericsError(const std::string& msg, double best)
      : std::runtime_error(msg), best_estimate(best) {}
};

struct QuadratureResult {
  double value = 0.0;
  double abs_error = 0.0;
  long evaluations = 0;
};

struct Bracket {
  double lo;
  double hi;
};

// log Gamma(x) for x > 0; throws std::domain_error otherwise.
double log_gamma(double x);

// Adaptive Gauss-Kronrod (7-15) on [a,b].  Throws NumericsError (carrying the
// best estimate so far) if the requested tolerance cannot be met within the
// evaluation budget.
QuadratureResult integrate(const std::function<double(double)>& f, double a,
                           double b, double abs_tol,
                           long max_evals = 2'000'000, int init_panels = 31);

// Integral over [a, +inf).  `decay_rate` is a caller-supplied positive rate r
// such that |f(t)| is eventually bounded by C * exp(-r t); the truncation
// point is chosen so that the certified tail bound falls below abs_tol / 100
// and the bound is folded into abs_error.
QuadratureResult integrate_semi_inf(const std::function<double(double)>& f,
                                    double a, double abs_tol,
                                    double decay_rate,
                                    long max_evals = 2'000'000);

// Brent root finding on a bracketing interval (f(lo), f(hi) of opposite sign).
double find_root(const std::function<double(double)>& f, Bracket br,
                 double tol = 1e-13, int max_iter = 200);

// Standard normal CDF.
double normal_cdf(double x);

// P(N1 <= h, N2 <= k) for a centred bivariate normal with covariance
// [[s11, s12], [s12, s22]].  Deterministic 1-D quadrature, abs tol `tol`.
double bivariate_normal_cdf(double h, double k, double s11, double s12,
                            double s22, double tol = 1e-8);

}  // namespace ctbp::num
