#include "asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "numerics.hpp"

namespace ctbp {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void require_affine_integrable(const ProcessSpec& spec, const char* what) {
  if (!spec.weights.is_affine())
    throw std::invalid_argument(std::string(what) +
                                " requires affine attachment weights");
  if (!spec.aging.integrable())
    throw std::invalid_argument(std::string(what) +
                                " requires an integrable aging profile");
}

// e^{-w} / (1 - e^{-w}) = 1 / (e^w - 1), stable for both tiny and large w.
double geom_ratio(double w) {
  double d = std::expm1(w);
  return std::isinf(d) ? 0.0 : 1.0 / d;
}

// log(1 - e^{-w}) for w > 0.
double log1m_exp(double w) { return std::log(-std::expm1(-w)); }

// The aging profile must be eventually decreasing for the Laplace argument;
// probe the derivative where most of the total activity has accumulated.
void check_eventually_decreasing(const AgingFunction& aging) {
  double t0 = aging.G_inv(0.9 * aging.G_inf());
  for (double t : {t0, 2.0 * t0 + 1.0, 4.0 * t0 + 2.0}) {
    if (aging.dg(t) > 0.0)
      throw SaddleError(
          "aging profile is not decreasing in its tail; the saddle-point "
          "approximation is not justified");
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// One-variable exponent function (no fitness spread).

double psi_age(const ProcessSpec& spec, double alpha, std::size_t k,
               double t) {
  const double a = spec.weights.a, b = spec.weights.b;
  double G = spec.aging.G(t);
  return alpha / k * t + b / k * G - log1m_exp(a * G);
}

double psi_age_deriv(const ProcessSpec& spec, double alpha, std::size_t k,
                     double t) {
  const double a = spec.weights.a, b = spec.weights.b;
  double g = spec.aging.g(t);
  double r = geom_ratio(a * spec.aging.G(t));
  return alpha / k + b / k * g - a * g * r;
}

double psi_age_curvature(const ProcessSpec& spec, double alpha, std::size_t k,
                         double t) {
  (void)alpha;
  const double a = spec.weights.a, b = spec.weights.b;
  double g = spec.aging.g(t), dg = spec.aging.dg(t);
  double r = geom_ratio(a * spec.aging.G(t));
  double kd = static_cast<double>(k);
  return b * dg + kd * a * a * g * g * r * (1.0 + r) - kd * a * dg * r;
}

Saddle1D saddle_age(const ProcessSpec& spec, double alpha, std::size_t k) {
  require_affine_integrable(spec, "saddle_age");
  check_eventually_decreasing(spec.aging);
  if (k < 1) throw std::invalid_argument("saddle_age requires k >= 1");

  auto deriv = [&](double t) { return psi_age_deriv(spec, alpha, k, t); };

  // The derivative tends to -inf at 0+ and to alpha/k > 0 at infinity; grow
  // the upper end until it is positive, then demand exactly one sign change
  // on a log-spaced probe grid.
  double t_hi = 1.0;
  int grow = 0;
  while (deriv(t_hi) <= 0.0) {
    t_hi *= 2.0;
    if (++grow > 1024)
      throw SaddleError("saddle_age: derivative never becomes positive");
  }
  const double t_lo = 1e-8;
  const int n = 256;
  double prev_t = t_lo, prev_d = deriv(t_lo);
  int sign_changes = 0;
  num::Bracket br{t_lo, t_hi};
  double ratio = std::pow(t_hi / t_lo, 1.0 / n);
  for (int i = 1; i <= n; ++i) {
    double t = t_lo * std::pow(ratio, i);
    double d = deriv(t);
    if (prev_d < 0.0 && d >= 0.0) {
      ++sign_changes;
      br = {prev_t, t};
    } else if (prev_d >= 0.0 && d < 0.0) {
      ++sign_changes;
    }
    prev_t = t;
    prev_d = d;
  }
  if (sign_changes == 0)
    throw SaddleError(
        "saddle_age: no interior minimum found on the probe grid");
  if (sign_changes > 1) {
    std::ostringstream os;
    os << "saddle_age: derivative changes sign " << sign_changes
       << " times on the probe grid; the minimum is not unique";
    throw SaddleError(os.str());
  }

  Saddle1D s;
  s.k = k;
  s.t_k = num::find_root(deriv, br, 1e-14);
  s.psi_value = psi_age(spec, alpha, k, s.t_k);
  s.second_deriv = psi_age_curvature(spec, alpha, k, s.t_k);
  s.valid = s.second_deriv > 0.0 && std::abs(deriv(s.t_k)) <= 1e-9;
  return s;
}

Saddle1D saddle_age(const ProcessSpec& spec, std::size_t k) {
  return saddle_age(spec, malthusian(spec).alpha, k);
}

double log_asymptotic_pk_age(const ProcessSpec& spec, double alpha,
                             std::size_t k) {
  Saddle1D s = saddle_age(spec, alpha, k);
  if (!s.valid)
    throw SaddleError("asymptotic_pk_age: saddle point is not valid");
  const double a = spec.weights.a, b = spec.weights.b;
  double ba = b / a;
  double kd = static_cast<double>(k);
  return num::log_gamma(kd + ba) - num::log_gamma(ba) -
         num::log_gamma(kd + 1.0) + std::log(alpha) +
         0.5 * std::log(2.0 * M_PI / s.second_deriv) - kd * s.psi_value +
         std::log(num::normal_cdf(s.t_k * std::sqrt(s.second_deriv)));
}

double asymptotic_pk_age(const ProcessSpec& spec, double alpha,
                         std::size_t k) {
  return std::exp(log_asymptotic_pk_age(spec, alpha, k));
}

double asymptotic_pk_age(const ProcessSpec& spec, std::size_t k) {
  return asymptotic_pk_age(spec, malthusian(spec).alpha, k);
}

// ---------------------------------------------------------------------------
// Two-variable exponent function (aging and a smooth fitness density).

double psi_age_fitness(const ProcessSpec& spec, double alpha, std::size_t k,
                       double t, double s) {
  const double a = spec.weights.a, b = spec.weights.b;
  double G = spec.aging.G(t);
  double mu = spec.fitness.density(s);
  if (!(mu > 0.0)) return std::numeric_limits<double>::infinity();
  return alpha / k * t + b / k * s * G - std::log(mu) / k -
         log1m_exp(s * a * G);
}

void psi_age_fitness_grad(const ProcessSpec& spec, double alpha, std::size_t k,
                          double t, double s, double* dt, double* ds) {
  const double a = spec.weights.a, b = spec.weights.b;
  double G = spec.aging.G(t), g = spec.aging.g(t);
  double r = geom_ratio(s * a * G);
  if (dt) *dt = alpha / k + b / k * s * g - s * a * g * r;
  if (ds) *ds = b / k * G - spec.fitness.dlog_density(s) / k - a * G * r;
}

void psi_age_fitness_hessian(const ProcessSpec& spec, double alpha,
                             std::size_t k, double t, double s,
                             double out[2][2]) {
  (void)alpha;
  const double a = spec.weights.a, b = spec.weights.b;
  double G = spec.aging.G(t), g = spec.aging.g(t), dg = spec.aging.dg(t);
  double r = geom_ratio(s * a * G);
  double rr = r * (1.0 + r);
  double kd = static_cast<double>(k);
  out[0][0] = b * s * dg + kd * s * s * a * a * g * g * rr - kd * s * a * dg * r;
  out[1][1] = -spec.fitness.d2log_density(s) + kd * a * a * G * G * rr;
  out[0][1] = out[1][0] =
      b * g - kd * a * g * r + kd * s * a * a * g * G * rr;
}

Saddle2D saddle_age_fitness(const ProcessSpec& spec, double alpha,
                            std::size_t k) {
  require_affine_integrable(spec, "saddle_age_fitness");
  check_eventually_decreasing(spec.aging);
  const FitnessDistribution& fit = spec.fitness;
  if (!fit.has_density() || fit.bounded())
    throw std::invalid_argument(
        "saddle_age_fitness requires a smooth fitness density with unbounded "
        "support");
  if (fit.tail() == FitnessTail::HeavyTail)
    throw std::invalid_argument(
        "saddle_age_fitness: heavy-tailed fitness yields an explosive "
        "process with no limiting degree distribution");
  if (k < 1) throw std::invalid_argument("saddle_age_fitness requires k >= 1");

  const double a = spec.weights.a, b = spec.weights.b;
  double t = 1.0;
  double s = std::max(fit.mean(), 1.0);
  double dt = kNaN, ds = kNaN;
  bool converged = false;

  for (int round = 0; round < 500; ++round) {
    // Fitness update: bracketed root of the s-partial at the current t.  A
    // closed-form update s = log(1 + k a G / (b G - (log mu)'(s))) / (a G)
    // seeds the bracket when it is usable; the root solve itself stays
    // robust for sharply varying densities.
    double G = spec.aging.G(t);
    double d = b * G - fit.dlog_density(s);
    if (d > 0.0) {
      double seed = std::log1p(k * a * G / d) / (a * G);
      if (std::isfinite(seed) && seed > 0.0) s = seed;
    }
    auto dpsi_ds = [&](double ss) {
      double out;
      psi_age_fitness_grad(spec, alpha, k, t, ss, nullptr, &out);
      return out;
    };
    {
      double lo = s, hi = std::max(s, 1.0);
      int guard = 0;
      while (dpsi_ds(lo) >= 0.0) {
        lo *= 0.5;
        if (++guard > 400)
          throw SaddleError(
              "saddle_age_fitness: no negative-slope fitness bracket end");
      }
      guard = 0;
      while (dpsi_ds(hi) <= 0.0) {
        hi *= 2.0;
        if (++guard > 1024)
          throw SaddleError(
              "saddle_age_fitness: no positive-slope fitness bracket end");
      }
      s = num::find_root(dpsi_ds, {lo, hi}, 1e-14);
    }

    // Age update: bracketed root of the t-partial at the current s.
    auto dpsi_dt = [&](double tt) {
      double out;
      psi_age_fitness_grad(spec, alpha, k, tt, s, &out, nullptr);
      return out;
    };
    double lo = t, hi = std::max(t, 1.0);
    int guard = 0;
    while (dpsi_dt(lo) >= 0.0) {
      lo *= 0.5;
      if (++guard > 400)
        throw SaddleError("saddle_age_fitness: no negative-slope bracket end");
    }
    guard = 0;
    while (dpsi_dt(hi) <= 0.0) {
      hi *= 2.0;
      if (++guard > 1024)
        throw SaddleError("saddle_age_fitness: no positive-slope bracket end");
    }
    t = num::find_root(dpsi_dt, {lo, hi}, 1e-14);

    psi_age_fitness_grad(spec, alpha, k, t, s, &dt, &ds);
    if (std::max(std::abs(dt), std::abs(ds)) <= 1e-8) {
      converged = true;
      break;
    }
  }
  if (!converged) {
    std::ostringstream os;
    os << "saddle_age_fitness: no convergence after 500 rounds (k=" << k
       << ", t=" << t << ", s=" << s << ", grad=(" << dt << ", " << ds << "))";
    throw SaddleError(os.str());
  }

  Saddle2D out;
  out.k = k;
  out.t_k = t;
  out.s_k = s;
  out.psi_value = psi_age_fitness(spec, alpha, k, t, s);
  psi_age_fitness_hessian(spec, alpha, k, t, s, out.hessian);
  out.determinant = out.hessian[0][0] * out.hessian[1][1] -
                    out.hessian[0][1] * out.hessian[1][0];
  if (!(out.hessian[0][0] > 0.0) || !(out.determinant > 0.0)) {
    std::ostringstream os;
    os << "saddle_age_fitness: Hessian not positive definite at (t=" << t
       << ", s=" << s << "): H=[[" << out.hessian[0][0] << ", "
       << out.hessian[0][1] << "], [" << out.hessian[1][0] << ", "
       << out.hessian[1][1] << "]]";
    throw SaddleError(os.str());
  }
  out.valid = true;
  return out;
}

Saddle2D saddle_age_fitness(const ProcessSpec& spec, std::size_t k) {
  return saddle_age_fitness(spec, malthusian(spec).alpha, k);
}

double log_asymptotic_pk_age_fitness(const ProcessSpec& spec, double alpha,
                                     std::size_t k) {
  Saddle2D s = saddle_age_fitness(spec, alpha, k);
  if (!s.valid)
    throw SaddleError("asymptotic_pk_age_fitness: saddle point is not valid");
  const double a = spec.weights.a, b = spec.weights.b;
  double ba = b / a;
  double kd = static_cast<double>(k);
  // Covariance of the local Gaussian is the inverse of the scaled Hessian.
  double c11 = s.hessian[1][1] / s.determinant;
  double c22 = s.hessian[0][0] / s.determinant;
  double c12 = -s.hessian[0][1] / s.determinant;
  double orthant =
      num::bivariate_normal_cdf(s.t_k, s.s_k, c11, c12, c22, 1e-10);
  return num::log_gamma(kd + ba) - num::log_gamma(ba) -
         num::log_gamma(kd + 1.0) + std::log(alpha) + std::log(2.0 * M_PI) -
         0.5 * std::log(s.determinant) - kd * s.psi_value + std::log(orthant);
}

double asymptotic_pk_age_fitness(const ProcessSpec& spec, double alpha,
                                 std::size_t k) {
  return std::exp(log_asymptotic_pk_age_fitness(spec, alpha, k));
}

double asymptotic_pk_age_fitness(const ProcessSpec& spec, std::size_t k) {
  return asymptotic_pk_age_fitness(spec, malthusian(spec).alpha, k);
}

// ---------------------------------------------------------------------------
// Tail-shape prediction.

TailPrediction predicted_tail(const ProcessSpec& spec) {
  TailPrediction out;
  out.exponent = out.log_power = out.stretch_power = out.stretch_rate =
      out.truncation_rate = kNaN;

  Verdict v = supercriticality(spec);
  if (v.regime == Regime::Explosive) {
    out.tail_class = TailClass::Explosive;
    out.correction = "explosive process: no limiting degree distribution";
    return out;
  }
  if (!spec.weights.is_affine())
    throw std::invalid_argument(
        "predicted_tail supports affine attachment weights only");

  const double a = spec.weights.a;
  const double Ginf = spec.aging.G_inf();
  const FitnessDistribution& fit = spec.fitness;

  double alpha = kNaN;
  if (v.regime == Regime::Supercritical) {
    try {
      alpha = malthusian(spec).alpha;
    } catch (const std::exception&) {
    }
  }

  if (!spec.aging.integrable()) {
    out.tail_class = TailClass::PowerLaw;
    if (fit.is_degenerate_one()) out.exponent = 1.0 + alpha / a;
    out.correction = "stationary power law k^{-(1 + alpha/a)}";
    return out;
  }

  switch (fit.tail()) {
    case FitnessTail::Bounded: {
      double gamma = fit.upper();
      out.tail_class = TailClass::ExponentialTruncation;
      out.truncation_rate = -log1m_exp(a * gamma * Ginf);
      out.correction =
          "geometric truncation (1 - e^{-a gamma G_inf})^k with slowly "
          "varying prefactors";
      return out;
    }
    case FitnessTail::ExponentialTail: {
      out.tail_class = TailClass::PowerLaw;
      out.exponent = 1.0 + fit.theta() / (a * Ginf);
      switch (spec.aging.family()) {
        case AgingFamily::Exponential:
          out.log_power = alpha / spec.aging.lambda();
          out.correction = "k^{-tau} (log k)^{alpha/lambda}";
          break;
        case AgingFamily::Power:
          out.correction = "k^{-tau} exp(-alpha (log k)^{1/lambda})";
          break;
        case AgingFamily::Lognormal:
          out.correction = "k^{-tau} exp(-alpha e^{sqrt(log k)})";
          break;
        default:
          out.correction = "k^{-tau} with slowly varying correction";
          break;
      }
      return out;
    }
    case FitnessTail::SubExponentialTail: {
      out.tail_class = TailClass::StretchedExponential;
      out.stretch_power = 1.0 + fit.eps();
      out.stretch_rate =
          fit.theta() / std::pow(a * Ginf, 1.0 + fit.eps());
      out.correction =
          "k^{-1} exp(-rate (log k)^{1+eps}) with slowly varying prefactors";
      return out;
    }
    case FitnessTail::HeavyTail:
      out.tail_class = TailClass::Explosive;
      out.correction = "explosive process: no limiting degree distribution";
      return out;
  }
  return out;
}

}  // namespace ctbp
