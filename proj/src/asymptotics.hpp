#pragma once
#include <cstddef>
#include <stdexcept>
#include <string>

#include "malthus.hpp"
#include "model.hpp"

namespace ctbp {

// Saddle-point machinery for the large-k behaviour of the limiting degree
// distribution with affine weights a*k+b and an integrable aging profile.
// The degree probabilities are Gamma-ratio prefactors times Laplace-type
// integrals exp(-k*Psi_k); the minimiser of Psi_k yields the asymptotics.

// Thrown when the exponent function has no unique interior minimum (the
// Laplace approximation is then not justified) or when the iteration for the
// two-variable saddle fails to converge.
struct SaddleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Saddle1D {
  std::size_t k = 0;
  double t_k = 0.0;          // minimiser of Psi_k(t)
  double psi_value = 0.0;    // Psi_k(t_k)
  double second_deriv = 0.0; // k * Psi_k''(t_k), positive at a valid saddle
  bool valid = false;
};

struct Saddle2D {
  std::size_t k = 0;
  double t_k = 0.0, s_k = 0.0;  // age and fitness coordinates of the minimum
  double psi_value = 0.0;       // Psi_k(t_k, s_k)
  double hessian[2][2] = {{0.0, 0.0}, {0.0, 0.0}};  // k * H_k entries
  double determinant = 0.0;
  bool valid = false;
};

enum class TailClass {
  Explosive,              // no limiting distribution to predict
  PowerLaw,               // k^{-tau} with slowly varying corrections
  StretchedExponential,   // exp(-rate * (log k)^power)
  ExponentialTruncation,  // geometric factor (1 - e^{-a gamma G_inf})^k
};

struct TailPrediction {
  TailClass tail_class = TailClass::ExponentialTruncation;
  double exponent = 0.0;         // power-law tau (NaN when not applicable)
  double log_power = 0.0;        // exponent of the (log k) correction factor
  double stretch_power = 0.0;    // power of log k in the stretched exponent
  double stretch_rate = 0.0;     // coefficient of (log k)^stretch_power
  double truncation_rate = 0.0;  // -log(1 - e^{-a gamma G_inf})
  std::string correction;        // human-readable description of the shape
};

// ---------------------------------------------------------------------------
// Exponent functions, exposed for property tests (finite-difference checks).

// Psi_k(t) = (alpha/k) t + (b/k) G(t) - log(1 - e^{-a G(t)}).
double psi_age(const ProcessSpec& spec, double alpha, std::size_t k, double t);
double psi_age_deriv(const ProcessSpec& spec, double alpha, std::size_t k,
                     double t);
// k * Psi_k''(t) (valid at any t, not just the saddle).
double psi_age_curvature(const ProcessSpec& spec, double alpha, std::size_t k,
                         double t);

// Psi_k(t,s) = (alpha/k) t + (b/k) s G(t) - (1/k) log mu(s)
//              - log(1 - e^{-s a G(t)}).
double psi_age_fitness(const ProcessSpec& spec, double alpha, std::size_t k,
                       double t, double s);
void psi_age_fitness_grad(const ProcessSpec& spec, double alpha, std::size_t k,
                          double t, double s, double* dt, double* ds);
// k * Hessian of Psi_k(t,s) (valid at any point).
void psi_age_fitness_hessian(const ProcessSpec& spec, double alpha,
                             std::size_t k, double t, double s,
                             double out[2][2]);

// ---------------------------------------------------------------------------
// Saddle solvers and asymptotic degree probabilities.

// Unique minimiser of Psi_k for affine weights + integrable aging, no
// fitness spread.  Probes the derivative sign on a log grid; more than one
// sign change raises SaddleError instead of guessing.
Saddle1D saddle_age(const ProcessSpec& spec, double alpha, std::size_t k);
Saddle1D saddle_age(const ProcessSpec& spec, std::size_t k);

// Laplace-method approximation of p_k assembled in log space:
// Gamma(k+b/a)/(Gamma(b/a)Gamma(k+1)) * alpha * sqrt(2 pi / (k Psi''))
//   * exp(-k Psi(t_k)) * Phi(t_k sqrt(k Psi'')).
double asymptotic_pk_age(const ProcessSpec& spec, double alpha, std::size_t k);
double asymptotic_pk_age(const ProcessSpec& spec, std::size_t k);
// log of the same quantity, usable far past double underflow.
double log_asymptotic_pk_age(const ProcessSpec& spec, double alpha,
                             std::size_t k);

// Joint minimiser over (age, fitness) for a smooth unbounded fitness
// density.  Alternates a closed-form fitness update with a bracketed root
// solve in the age coordinate until the gradient norm falls below 1e-8.
Saddle2D saddle_age_fitness(const ProcessSpec& spec, double alpha,
                            std::size_t k);
Saddle2D saddle_age_fitness(const ProcessSpec& spec, std::size_t k);

// Two-variable Laplace approximation:
// Gamma(k+b/a)/(Gamma(b/a)Gamma(k+1)) * alpha * 2 pi / sqrt(det(k H))
//   * exp(-k Psi(t_k,s_k)) * P(N1 <= t_k, N2 <= s_k),
// with (N1,N2) centred bivariate normal with covariance (k H)^{-1}.
double asymptotic_pk_age_fitness(const ProcessSpec& spec, double alpha,
                                 std::size_t k);
double asymptotic_pk_age_fitness(const ProcessSpec& spec, std::size_t k);
double log_asymptotic_pk_age_fitness(const ProcessSpec& spec, double alpha,
                                     std::size_t k);

// Closed-form prediction of the tail shape of the limiting degree
// distribution, classified by the fitness tail and the aging profile.
TailPrediction predicted_tail(const ProcessSpec& spec);

}  // namespace ctbp
