#include "degree.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "numerics.hpp"

namespace ctbp {

using num::log_gamma;

namespace {

// log P(V_u = k) for affine weights a k + b (a >= 0), operational time u.
double log_affine_occupancy(double a, double b, double u, std::size_t k) {
  double kk = static_cast<double>(k);
  if (u <= 0.0) return (k == 0) ? 0.0 : -kInf;
  if (a == 0.0)  // Poisson(b u)
    return -b * u + kk * std::log(b * u) - log_gamma(kk + 1.0);
  double r = b / a;
  double log1mx = std::log(-std::expm1(-a * u));
  return log_gamma(kk + r) - log_gamma(r) - log_gamma(kk + 1.0) - b * u +
         kk * log1mx;
}

// Uniformization of the pure-birth forward equations; truncation error in
// the Poisson tail is certified below 1e-14.
std::vector<double> general_occupancy(const WeightSequence& w, double u,
                                      std::size_t kmax) {
  std::vector<double> f(kmax + 1);
  double fmax = 0.0;
  for (std::size_t k = 0; k <= kmax; ++k) {
    f[k] = w(k);
    fmax = std::max(fmax, f[k]);
  }
  std::vector<double> pi(kmax + 1, 0.0), out(kmax + 1, 0.0), next(kmax + 1);
  pi[0] = 1.0;
  double mu = fmax * u;
  double logw = -mu;
  double acc = 0.0;
  std::size_t n = 0;
  std::size_t n_cap =
      100 + 4 * static_cast<std::size_t>(mu + 10.0 * std::sqrt(mu + 1.0));
  while (acc < 1.0 - 1e-14 && n <= n_cap) {
    if (logw > -745.0) {
      double wn = std::exp(logw);
      for (std::size_t k = 0; k <= kmax; ++k) out[k] += wn * pi[k];
      acc += wn;
    }
    next[0] = pi[0] * (1.0 - f[0] / fmax);
    for (std::size_t k = 1; k <= kmax; ++k)
      next[k] = pi[k] * (1.0 - f[k] / fmax) + pi[k - 1] * (f[k - 1] / fmax);
    pi.swap(next);
    ++n;
    logw += std::log(mu) - std::log(static_cast<double>(n));
  }
  return out;
}

// ---------------------------------------------------------------------------
// log of the integral of exp(h(t)) over [0, inf) for integrands with a single
// dominant region; the maximum is located by scanning, the peak region is
// integrated separately from the flanks.

struct LogIntegral {
  double log_value;
  double t_peak;
};

LogIntegral log_integrate_exp(const std::function<double(double)>& h,
                              double T_init) {
  double T = std::max(T_init, 1.0);
  std::vector<double> ts;
  for (double t = 1e-9; t < T; t *= 1.7) ts.push_back(t);
  const int n_lin = 192;
  for (int i = 0; i <= n_lin; ++i) ts.push_back(T * i / n_lin);
  double m = -kInf, tm = 0.0;
  auto consider = [&](double t) {
    double v = h(t);
    if (std::isfinite(v) && v > m) {
      m = v;
      tm = t;
    }
  };
  for (double t : ts) consider(t);
  while (h(T) > m - 60.0 && T < 1e12) {
    double T2 = 2.0 * T;
    for (int i = 1; i <= 64; ++i) consider(T + (T2 - T) * i / 64.0);
    T = T2;
  }
  if (!std::isfinite(m))
    throw num::NumericsError("log_integrate_exp: integrand vanishes", -kInf);
  // Bounds of the region within 35 nats of the maximum, from the scan.
  double t_lo = tm, t_hi = tm;
  std::sort(ts.begin(), ts.end());
  for (double t : ts) {
    double v = h(t);
    if (std::isfinite(v) && v > m - 35.0) {
      t_lo = std::min(t_lo, t);
      t_hi = std::max(t_hi, t);
    }
  }
  t_lo = std::max(0.0, t_lo - (t_hi - t_lo + 1e-8) * 0.1);
  t_hi = std::min(T, t_hi + (t_hi - t_lo + 1e-8) * 0.1);
  auto f = [&](double t) {
    double v = h(t) - m;
    return (v > -745.0) ? std::exp(v) : 0.0;
  };
  double total = 0.0;
  double rough = num::integrate(f, t_lo, t_hi, 1e-3, 100000, 8).value;
  double tol = std::max(1e-13, 1e-11 * rough);
  total += num::integrate(f, t_lo, t_hi, tol, 2'000'000, 15).value;
  if (t_lo > 0.0) total += num::integrate(f, 0.0, t_lo, tol, 2'000'000, 8).value;
  if (t_hi < T) total += num::integrate(f, t_hi, T, tol, 2'000'000, 8).value;
  return {m + std::log(total), tm};
}

// Composite-Simpson vector quadrature with doubling until convergence.
std::vector<double> vec_integrate(
    const std::function<void(double, std::vector<double>&)>& f, double lo,
    double hi, std::size_t dim, double tol) {
  auto level = [&](int n) {
    std::vector<double> acc(dim, 0.0), tmp(dim);
    double hstep = (hi - lo) / n;
    for (int i = 0; i <= 2 * n; ++i) {
      double y = lo + 0.5 * hstep * i;
      double wgt = (i == 0 || i == 2 * n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
      f(y, tmp);
      for (std::size_t d = 0; d < dim; ++d) acc[d] += wgt * tmp[d];
    }
    for (std::size_t d = 0; d < dim; ++d) acc[d] *= hstep / 6.0;
    return acc;
  };
  std::vector<double> prev = level(16);
  for (int n = 32; n <= 1024; n *= 2) {
    std::vector<double> cur = level(n);
    double diff = 0.0;
    for (std::size_t d = 0; d < dim; ++d)
      diff = std::max(diff, std::abs(cur[d] - prev[d]));
    if (diff < tol) return cur;
    prev = std::move(cur);
  }
  return prev;
}

double fitness_cutoff(const FitnessDistribution& fit) {
  return fit.bounded() ? fit.upper() : fit.quantile(1.0 - 1e-13) + 25.0;
}

void require_affine(const WeightSequence& w, const char* what) {
  if (!w.is_affine() || w.a <= 0.0)
    throw std::invalid_argument(std::string(what) +
                                " requires strictly affine weights a k + b "
                                "with a > 0");
}

// Occupancy of the raw birth process on a dense operational-time grid,
// used for general-weight aging routes (k capped at moderate values).
struct OccupancyGrid {
  double u_max;
  std::size_t kmax;
  std::vector<std::vector<double>> p;  // p[j][k] at u_j = j * du
  double du;

  double at(std::size_t k, double u) const {
    if (u <= 0.0) return (k == 0) ? 1.0 : 0.0;
    double x = std::min(u, u_max) / du;
    std::size_t j = std::min(static_cast<std::size_t>(x), p.size() - 2);
    double w = x - static_cast<double>(j);
    // Catmull-Rom in the grid index.
    std::size_t j0 = (j > 0) ? j - 1 : 0;
    std::size_t j2 = j + 1, j3 = std::min(j + 2, p.size() - 1);
    double p0 = p[j0][k], p1 = p[j][k], p2 = p[j2][k], p3 = p[j3][k];
    double a0 = -0.5 * p0 + 1.5 * p1 - 1.5 * p2 + 0.5 * p3;
    double a1 = p0 - 2.5 * p1 + 2.0 * p2 - 0.5 * p3;
    double a2 = -0.5 * p0 + 0.5 * p2;
    double v = ((a0 * w + a1) * w + a2) * w + p1;
    return std::max(v, 0.0);
  }
};

OccupancyGrid build_occupancy_grid(const WeightSequence& w, double u_max,
                                   std::size_t kmax) {
  OccupancyGrid gr;
  gr.u_max = u_max;
  gr.kmax = kmax;
  double fmax = 0.0;
  std::vector<double> f(kmax + 1);
  for (std::size_t k = 0; k <= kmax; ++k) {
    f[k] = w(k);
    fmax = std::max(fmax, f[k]);
  }
  std::size_t n = std::max<std::size_t>(
      4096, static_cast<std::size_t>(u_max * fmax / 0.01) + 1);
  n = std::min<std::size_t>(n, 1u << 18);
  gr.du = u_max / static_cast<double>(n);
  gr.p.assign(n + 1, std::vector<double>(kmax + 1, 0.0));
  std::vector<double> P(kmax + 1, 0.0), k1, k2, k3, k4, tmp(kmax + 1);
  P[0] = 1.0;
  gr.p[0] = P;
  auto deriv = [&](const std::vector<double>& x, std::vector<double>& d) {
    d.resize(kmax + 1);
    d[0] = -f[0] * x[0];
    for (std::size_t k = 1; k <= kmax; ++k)
      d[k] = f[k - 1] * x[k - 1] - f[k] * x[k];
  };
  int sub = std::max(1, static_cast<int>(gr.du * fmax / 0.05) + 1);
  double dt = gr.du / sub;
  for (std::size_t j = 1; j <= n; ++j) {
    for (int s = 0; s < sub; ++s) {
      deriv(P, k1);
      for (std::size_t k = 0; k <= kmax; ++k) tmp[k] = P[k] + 0.5 * dt * k1[k];
      deriv(tmp, k2);
      for (std::size_t k = 0; k <= kmax; ++k) tmp[k] = P[k] + 0.5 * dt * k2[k];
      deriv(tmp, k3);
      for (std::size_t k = 0; k <= kmax; ++k) tmp[k] = P[k] + dt * k3[k];
      deriv(tmp, k4);
      for (std::size_t k = 0; k <= kmax; ++k)
        P[k] += dt / 6.0 * (k1[k] + 2.0 * k2[k] + 2.0 * k3[k] + k4[k]);
    }
    gr.p[j] = P;
  }
  return gr;
}

constexpr std::size_t kGeneralAgingCap = 200;

}  // namespace

std::vector<double> birth_occupancy(const WeightSequence& w, double u,
                                    std::size_t kmax) {
  std::vector<double> out(kmax + 1, 0.0);
  if (u <= 0.0) {
    out[0] = 1.0;
    return out;
  }
  if (w.is_affine()) {
    for (std::size_t k = 0; k <= kmax; ++k) {
      double lp = log_affine_occupancy(w.a, w.b, u, k);
      out[k] = (lp > -745.0) ? std::exp(lp) : 0.0;
    }
    return out;
  }
  return general_occupancy(w, u, kmax);
}

double birth_mean(const WeightSequence& w, double u) {
  if (u <= 0.0) return 0.0;
  if (w.is_affine()) {
    if (w.a == 0.0) return w.b * u;
    return w.b / w.a * std::expm1(w.a * u);
  }
  std::size_t kmax = 256;
  while (true) {
    std::vector<double> p = birth_occupancy(w, u, kmax);
    double mass = 0.0, mean = 0.0;
    for (std::size_t k = 0; k <= kmax; ++k) {
      mass += p[k];
      mean += static_cast<double>(k) * p[k];
    }
    double tail = std::max(0.0, 1.0 - mass);
    if (tail < 1e-12) return mean;
    if (kmax >= (1u << 16))
      throw num::NumericsError(
          "birth_mean: occupancy tail does not close; the mean may diverge",
          mean);
    kmax *= 2;
  }
}

// ---------------------------------------------------------------------------

DegreeDistribution stationary_pk(const WeightSequence& w, double alpha,
                                 std::size_t kmax) {
  if (!(alpha > 0.0))
    throw std::domain_error("stationary_pk: alpha must be positive");
  DegreeDistribution d;
  d.method = DegreeMethod::ClosedForm;
  d.abs_tol = 1e-15;
  d.p.resize(kmax + 1);
  double logprod = 0.0;  // log prod_{i<k} f_i/(alpha+f_i)
  for (std::size_t k = 0; k <= kmax; ++k) {
    double fk = w(k);
    d.p[k] = std::exp(logprod + std::log(alpha / (alpha + fk)));
    logprod += std::log(fk / (alpha + fk));
  }
  d.tail_mass = std::exp(logprod);  // exact survival past kmax
  return d;
}

DegreeDistribution stationary_fitness_pk(const WeightSequence& w,
                                         const FitnessDistribution& fit,
                                         double alpha, std::size_t kmax) {
  if (!fit.bounded())
    throw std::invalid_argument(
        "stationary degree distribution requires bounded fitness: with "
        "unbounded fitness and no aging the transform diverges for every "
        "growth rate");
  if (fit.family() == FitnessFamily::Degenerate) {
    DegreeDistribution d = stationary_pk(w, alpha / fit.upper(), kmax);
    return d;
  }
  std::size_t dim = kmax + 2;  // entries + survival
  auto f = [&](double y, std::vector<double>& out) {
    std::fill(out.begin(), out.end(), 0.0);
    if (y <= 0.0) {
      // Zero-rate limit: all mass on degree zero.
      out[0] = fit.density(0.0);
      return;
    }
    double mu = fit.density(y);
    if (mu == 0.0) return;
    double logprod = 0.0;
    for (std::size_t k = 0; k <= kmax; ++k) {
      double fy = y * w(k);
      out[k] = mu * std::exp(logprod) * alpha / (alpha + fy);
      logprod += std::log(fy / (alpha + fy));
    }
    out[kmax + 1] = mu * std::exp(logprod);
  };
  std::vector<double> v =
      vec_integrate(f, 0.0, fit.upper(), dim, 1e-12);
  DegreeDistribution d;
  d.method = DegreeMethod::ClosedForm;
  d.abs_tol = 1e-10;
  d.p.assign(v.begin(), v.begin() + kmax + 1);
  d.tail_mass = std::max(0.0, v[kmax + 1]);
  return d;
}

std::vector<double> cohort_pk(const ProcessSpec& spec, double t,
                              std::size_t kmax) {
  double Gt = spec.aging.G(t);
  const FitnessDistribution& fit = spec.fitness;
  if (!fit.has_density())
    return birth_occupancy(spec.weights, fit.upper() * Gt, kmax);
  if (fit.family() == FitnessFamily::Exponential && spec.weights.is_affine())
    return expfit_cohort_pk(spec, t, kmax);
  double y_hi = fitness_cutoff(fit);
  auto f = [&](double y, std::vector<double>& out) {
    std::fill(out.begin(), out.end(), 0.0);
    if (y <= 0.0) {
      out[0] = fit.density(0.0);
      return;
    }
    double mu = fit.density(y);
    if (mu == 0.0) return;
    std::vector<double> p = birth_occupancy(spec.weights, y * Gt, kmax);
    for (std::size_t k = 0; k <= kmax; ++k) out[k] = mu * p[k];
  };
  return vec_integrate(f, 0.0, y_hi, kmax + 1, 1e-10);
}

// ---------------------------------------------------------------------------
// Aging-only limiting distribution.

DegreeDistribution aging_pk(const ProcessSpec& spec, double alpha,
                            std::size_t kmax) {
  if (!spec.aging.integrable())
    throw std::invalid_argument("aging_pk requires an integrable aging profile");
  if (!spec.fitness.is_degenerate_one())
    throw std::invalid_argument(
        "aging_pk handles the no-fitness case; use the fitness-aware routes");
  const WeightSequence& w = spec.weights;
  DegreeDistribution d;
  d.method = DegreeMethod::Quadrature;
  d.abs_tol = 1e-10;
  if (w.is_affine() && w.a > 0.0) {
    double a = w.a, b = w.b, r = b / a;
    d.p.resize(kmax + 1);
    for (std::size_t k = 0; k <= kmax; ++k) {
      double kk = static_cast<double>(k);
      auto h = [&](double t) {
        double G = spec.aging.G(t);
        double lt = -alpha * t - b * G;
        if (k > 0) {
          double one_m = -std::expm1(-a * G);
          if (one_m <= 0.0) return -kInf;
          lt += kk * std::log(one_m);
        }
        return lt;
      };
      LogIntegral li = log_integrate_exp(h, 10.0 / alpha);
      double lp = log_gamma(kk + r) - log_gamma(r) - log_gamma(kk + 1.0) +
                  std::log(alpha) + li.log_value;
      d.p[k] = (lp > -745.0) ? std::exp(lp) : 0.0;
    }
  } else {
    // General weights: occupancy grid + per-degree quadrature, moderate k.
    std::size_t cap = std::min(kmax, kGeneralAgingCap);
    OccupancyGrid gr =
        build_occupancy_grid(w, spec.aging.G_inf() * (1.0 - 1e-12), cap);
    d.p.assign(kmax + 1, 0.0);
    for (std::size_t k = 0; k <= cap; ++k) {
      auto f = [&](double t) {
        return alpha * std::exp(-alpha * t) * gr.at(k, spec.aging.G(t));
      };
      d.p[k] = num::integrate_semi_inf(f, 0.0, 1e-11, alpha).value;
    }
    d.abs_tol = 1e-8;
  }
  double mass = 0.0;
  for (double x : d.p) mass += x;
  d.tail_mass = std::max(0.0, 1.0 - mass);
  return d;
}

namespace {

double lhat_impl(const ProcessSpec& spec, std::size_t k, double alpha,
                 const OccupancyGrid* gr) {
  const WeightSequence& w = spec.weights;
  std::function<double(double)> log_occ;
  if (gr == nullptr) {
    log_occ = [&, k](double t) {
      return log_affine_occupancy(w.a, w.b, spec.aging.G(t), k);
    };
  } else {
    log_occ = [gr, &spec, k](double t) {
      double v = gr->at(k, spec.aging.G(t));
      return (v > 0.0) ? std::log(v) : -kInf;
    };
  }
  LogIntegral num_li = log_integrate_exp(
      [&](double t) {
        double g = spec.aging.g(t);
        return (g > 0.0 ? std::log(g) : -kInf) - alpha * t + log_occ(t);
      },
      10.0 / alpha);
  LogIntegral den_li = log_integrate_exp(
      [&](double t) { return -alpha * t + log_occ(t); }, 10.0 / alpha);
  if (den_li.log_value < -690.0)
    throw num::NumericsError(
        "lhat: the degree probability underflows at this k; use the "
        "saddle-point asymptotics instead",
        0.0);
  return std::exp(num_li.log_value - den_li.log_value);
}

}  // namespace

double lhat(const ProcessSpec& spec, std::size_t k, double alpha) {
  if (!spec.aging.integrable())
    return 1.0;  // constant activity: the correction factors are exactly one
  const WeightSequence& w = spec.weights;
  if (w.is_affine() && w.a > 0.0) return lhat_impl(spec, k, alpha, nullptr);
  OccupancyGrid gr = build_occupancy_grid(
      w, spec.aging.G_inf() * (1.0 - 1e-12),
      std::min<std::size_t>(k + 1, kGeneralAgingCap));
  return lhat_impl(spec, k, alpha, &gr);
}

DegreeDistribution aging_pk_product(const ProcessSpec& spec, double alpha,
                                    std::size_t kmax) {
  std::size_t cap = std::min<std::size_t>(kmax, kGeneralAgingCap);
  DegreeDistribution d;
  d.method = DegreeMethod::ProductFormula;
  d.abs_tol = 1e-8;
  d.p.assign(kmax + 1, 0.0);
  bool affine = spec.weights.is_affine() && spec.weights.a > 0.0;
  std::unique_ptr<OccupancyGrid> gr;
  if (!affine && spec.aging.integrable())
    gr = std::make_unique<OccupancyGrid>(build_occupancy_grid(
        spec.weights, spec.aging.G_inf() * (1.0 - 1e-12), cap));
  double logprod = 0.0;
  for (std::size_t k = 0; k <= cap; ++k) {
    double lh = spec.aging.integrable()
                    ? lhat_impl(spec, k, alpha, gr.get())
                    : 1.0;
    double fl = spec.weights(k) * lh;
    d.p[k] = std::exp(logprod) * alpha / (alpha + fl);
    logprod += std::log(fl / (alpha + fl));
  }
  d.tail_mass = std::exp(logprod);
  return d;
}

// ---------------------------------------------------------------------------
// Aging + fitness limiting distribution (two-dimensional quadrature).

namespace {

// log of the inner fitness integral
//   F_k(t) = int mu(s) exp(-b s G) (1 - exp(-a s G))^k ds
// for affine weights; exact Beta form for exponential fitness.
double log_inner_fitness(const ProcessSpec& spec, std::size_t k, double G) {
  const WeightSequence& w = spec.weights;
  const FitnessDistribution& fit = spec.fitness;
  double a = w.a, b = w.b;
  double kk = static_cast<double>(k);
  if (G <= 1e-300) return (k == 0) ? 0.0 : -kInf;
  if (fit.family() == FitnessFamily::Exponential) {
    double theta = fit.theta();
    double c = (theta + b * G) / (a * G);
    return std::log(theta / (a * G)) + log_gamma(c) + log_gamma(kk + 1.0) -
           log_gamma(c + kk + 1.0);
  }
  // General density: log-shifted quadrature in s.
  auto H = [&](double s) {
    if (s <= 0.0) return -kInf;
    double mu = fit.density(s);
    if (mu <= 0.0) return -kInf;
    double lt = std::log(mu) - b * s * G;
    if (k > 0) {
      double one_m = -std::expm1(-a * s * G);
      if (one_m <= 0.0) return -kInf;
      lt += kk * std::log(one_m);
    }
    return lt;
  };
  if (fit.bounded()) {
    double hi = fit.upper();
    double m = -kInf;
    for (int i = 1; i <= 64; ++i) m = std::max(m, H(hi * i / 64.0));
    if (!std::isfinite(m)) return -kInf;
    auto f = [&](double s) {
      double v = H(s) - m;
      return (v > -745.0) ? std::exp(v) : 0.0;
    };
    double rough = num::integrate(f, 0.0, hi, 1e-3, 100000, 8).value;
    double val = num::integrate(f, 0.0, hi, std::max(1e-13, 1e-11 * rough),
                                2'000'000, 15)
                     .value;
    return m + std::log(val);
  }
  LogIntegral li = log_integrate_exp(H, fit.quantile(1.0 - 1e-10) + 5.0);
  return li.log_value;
}

double log_aging_fitness_pk(const ProcessSpec& spec, double alpha,
                            std::size_t k) {
  const WeightSequence& w = spec.weights;
  double r = w.b / w.a;
  double kk = static_cast<double>(k);
  auto h = [&](double t) {
    return -alpha * t + log_inner_fitness(spec, k, spec.aging.G(t));
  };
  LogIntegral li = log_integrate_exp(h, 10.0 / alpha);
  return log_gamma(kk + r) - log_gamma(r) - log_gamma(kk + 1.0) +
         std::log(alpha) + li.log_value;
}

}  // namespace

DegreeDistribution aging_fitness_pk(const ProcessSpec& spec, double alpha,
                                    std::size_t kmax) {
  require_affine(spec.weights, "aging_fitness_pk");
  if (!spec.aging.integrable())
    throw std::invalid_argument(
        "aging_fitness_pk requires an integrable aging profile");
  if (!spec.fitness.has_density())
    throw std::invalid_argument(
        "aging_fitness_pk requires a fitness density; use aging_pk for "
        "deterministic fitness");
  DegreeDistribution d;
  d.method = DegreeMethod::Quadrature;
  d.abs_tol = 1e-9;
  d.p.resize(kmax + 1);
  for (std::size_t k = 0; k <= kmax; ++k) {
    double lp = log_aging_fitness_pk(spec, alpha, k);
    d.p[k] = (lp > -745.0) ? std::exp(lp) : 0.0;
  }
  double mass = 0.0;
  for (double x : d.p) mass += x;
  d.tail_mass = std::max(0.0, 1.0 - mass);
  return d;
}

// ---------------------------------------------------------------------------
// Exponential fitness closed forms.

namespace {
void require_expfit(const ProcessSpec& spec, const char* what) {
  require_affine(spec.weights, what);
  if (spec.fitness.family() != FitnessFamily::Exponential)
    throw std::invalid_argument(std::string(what) +
                                " requires exponential fitness");
}
}  // namespace

std::vector<double> expfit_cohort_pk(const ProcessSpec& spec, double t,
                                     std::size_t kmax) {
  require_expfit(spec, "expfit_cohort_pk");
  double G = spec.aging.G(t);
  double theta = spec.fitness.theta();
  std::vector<double> p(kmax + 1);
  double logprod = 0.0;
  for (std::size_t k = 0; k <= kmax; ++k) {
    double fG = spec.weights(k) * G;
    p[k] = std::exp(logprod) * theta / (theta + fG);
    logprod += std::log(fG / (theta + fG));
  }
  return p;
}

std::vector<double> expfit_lifetime_pk(const ProcessSpec& spec,
                                       std::size_t kmax) {
  require_expfit(spec, "expfit_lifetime_pk");
  if (!spec.aging.integrable())
    throw std::invalid_argument(
        "expfit_lifetime_pk requires an integrable aging profile");
  double Ginf = spec.aging.G_inf();
  double theta = spec.fitness.theta();
  std::vector<double> p(kmax + 1);
  double logprod = 0.0;
  for (std::size_t k = 0; k <= kmax; ++k) {
    double fG = spec.weights(k) * Ginf;
    p[k] = std::exp(logprod) * theta / (theta + fG);
    logprod += std::log(fG / (theta + fG));
  }
  return p;
}

DegreeDistribution expfit_pk(const ProcessSpec& spec, double alpha,
                             std::size_t kmax) {
  require_expfit(spec, "expfit_pk");
  if (!spec.aging.integrable())
    throw std::invalid_argument("expfit_pk requires an integrable aging profile");
  double theta = spec.fitness.theta();
  const WeightSequence& w = spec.weights;
  // p_k = int alpha e^{-alpha t} P_k(cohort at age t) dt, computed as a
  // vector over k with a truncated outer integral.
  double T = 45.0 / alpha;
  std::size_t dim = kmax + 2;
  auto f = [&](double t, std::vector<double>& out) {
    double G = spec.aging.G(t);
    double wgt = alpha * std::exp(-alpha * t);
    double logprod = 0.0;
    for (std::size_t k = 0; k <= kmax; ++k) {
      double fG = w(k) * G;
      out[k] = wgt * std::exp(logprod) * theta / (theta + fG);
      logprod += (fG > 0.0) ? std::log(fG / (theta + fG)) : -kInf;
    }
    out[kmax + 1] = wgt * std::exp(logprod);
  };
  std::vector<double> v = vec_integrate(f, 0.0, T, dim, 1e-11);
  DegreeDistribution d;
  d.method = DegreeMethod::Quadrature;
  d.abs_tol = 1e-9;
  d.p.assign(v.begin(), v.begin() + kmax + 1);
  d.tail_mass = std::max(0.0, v[kmax + 1]) + std::exp(-alpha * T);
  return d;
}

double dynamical_exponent(const ProcessSpec& spec, double t) {
  require_expfit(spec, "dynamical_exponent");
  if (!spec.aging.integrable())
    throw std::invalid_argument(
        "dynamical_exponent requires an integrable aging profile");
  double G = std::isinf(t) ? spec.aging.G_inf() : spec.aging.G(t);
  return 1.0 + spec.fitness.theta() / (spec.weights.a * G);
}

// ---------------------------------------------------------------------------

DegreeDistribution degree_distribution(const ProcessSpec& spec, double alpha,
                                       std::size_t kmax) {
  bool stationary = !spec.aging.integrable();
  if (stationary) {
    if (spec.fitness.is_degenerate_one())
      return stationary_pk(spec.weights, alpha, kmax);
    return stationary_fitness_pk(spec.weights, spec.fitness, alpha, kmax);
  }
  if (spec.fitness.family() == FitnessFamily::Degenerate &&
      !spec.fitness.is_degenerate_one()) {
    // Deterministic fitness is a pure rate scaling: fold it into the weights.
    double v = spec.fitness.upper();
    ProcessSpec scaled = spec;
    scaled.fitness = FitnessDistribution::degenerate(1.0);
    switch (spec.weights.family) {
      case WeightFamily::Affine:
        scaled.weights = WeightSequence::affine(spec.weights.a * v,
                                                spec.weights.b * v);
        break;
      case WeightFamily::Power:
        scaled.weights =
            WeightSequence::power(spec.weights.c * v, spec.weights.q,
                                  spec.weights.s0);
        break;
      case WeightFamily::Custom: {
        std::vector<double> tbl = spec.weights.table;
        for (double& x : tbl) x *= v;
        scaled.weights = WeightSequence::custom(tbl, spec.weights.tail_a * v,
                                                spec.weights.tail_b * v);
        break;
      }
    }
    return degree_distribution(scaled, alpha, kmax);
  }
  if (spec.fitness.is_degenerate_one()) {
    if (spec.weights.is_affine() && spec.weights.a > 0.0)
      return aging_pk(spec, alpha, kmax);
    return aging_pk_product(spec, alpha, kmax);
  }
  if (spec.fitness.family() == FitnessFamily::Exponential &&
      spec.weights.is_affine())
    return expfit_pk(spec, alpha, kmax);
  return aging_fitness_pk(spec, alpha, kmax);
}

}  // namespace ctbp
