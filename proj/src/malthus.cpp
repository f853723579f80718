#include "malthus.hpp"

#include <algorithm>
#include <cmath>

#include "degree.hpp"
#include "numerics.hpp"

namespace ctbp {

namespace {

// Asymptotic linear slope of the weight sequence (0 for bounded weights,
// +inf for superlinear growth).
double tail_slope(const WeightSequence& w) {
  switch (w.family) {
    case WeightFamily::Affine:
      return w.a;
    case WeightFamily::Power:
      if (w.q > 1.0) return kInf;
      return (w.q == 1.0) ? w.c : 0.0;
    case WeightFamily::Custom:
      return w.tail_a;
  }
  return 0.0;
}

bool is_stationary(const ProcessSpec& s) {
  return s.aging.family() == AgingFamily::Constant;
}

// Effective exponential growth rate of the mean-offspring curve when its
// limit diverges (domain-edge situations); estimated from two late probes.
double late_growth_rate(const ProcessSpec& spec) {
  double t1 = spec.aging.G_inv(spec.aging.G_inf() * (1.0 - 1e-5));
  double t2 = 2.0 * t1 + 1.0;
  double m1 = mean_offspring_at(spec, t1);
  double m2 = mean_offspring_at(spec, t2);
  if (!std::isfinite(m1) || !std::isfinite(m2)) return kInf;
  return std::max(0.0, (std::log(m2) - std::log(m1)) / (t2 - t1));
}

// Infimum of the set of alpha with a finite transform.
double alpha_floor(const ProcessSpec& spec, const Verdict& v) {
  double slope = tail_slope(spec.weights);
  if (is_stationary(spec)) {
    if (slope == 0.0) return 0.0;
    return slope * spec.fitness.upper();  // +inf when fitness is unbounded
  }
  if (std::isfinite(v.limit_mean_offspring)) return 0.0;
  return late_growth_rate(spec);
}

double limit_mean_offspring(const ProcessSpec& spec) {
  const WeightSequence& w = spec.weights;
  double Ginf = spec.aging.G_inf();
  if (w.is_affine()) {
    if (w.a == 0.0) {
      double m = spec.fitness.mean();
      return std::isfinite(Ginf) && std::isfinite(m) ? w.b * Ginf * m : kInf;
    }
    if (!std::isfinite(Ginf)) return kInf;
    double phi = spec.fitness.mgf(w.a * Ginf);
    return std::isfinite(phi) ? w.b / w.a * (phi - 1.0) : kInf;
  }
  if (!std::isfinite(Ginf)) return kInf;
  double t_lim = spec.aging.G_inv(Ginf * (1.0 - 1e-12));
  return mean_offspring_at(spec, t_lim);
}

}  // namespace

double stationary_laplace(const WeightSequence& w, double alpha) {
  if (!(alpha > 0.0))
    throw std::domain_error("stationary_laplace: alpha must be positive");
  if (w.is_affine())
    return (alpha > w.a) ? w.b / (alpha - w.a) : kInf;
  WeightClass cls = classify_weights(w);
  if (cls.recip_sum_finite) return kInf;  // terms do not vanish
  double slope = tail_slope(w);
  if (slope > 0.0 && alpha <= slope) return kInf;
  double logterm = 0.0, sum = 0.0, term = 0.0;
  std::size_t k = 0;
  const std::size_t cap = 2'000'000;
  double fk = 0.0;
  for (; k < cap; ++k) {
    fk = w(k);
    logterm += std::log(fk / (alpha + fk));
    term = std::exp(logterm);
    sum += term;
    if (k > 64 && term < 1e-17 * sum) break;
  }
  // Integral-style tail estimate past the truncation point.
  if (slope > 0.0)
    sum += term * static_cast<double>(k) / (alpha / slope - 1.0);
  else
    sum += term * fk / alpha;
  return sum;
}

double mean_offspring_at(const ProcessSpec& spec, double t) {
  const WeightSequence& w = spec.weights;
  const FitnessDistribution& fit = spec.fitness;
  double Gt = spec.aging.G(t);
  if (w.is_affine()) {
    if (w.a == 0.0) {
      double m = fit.mean();
      return std::isfinite(m) ? w.b * Gt * m : kInf;
    }
    double phi = fit.mgf(w.a * Gt);
    return std::isfinite(phi) ? w.b / w.a * (phi - 1.0) : kInf;
  }
  // General weights.
  if (!fit.has_density()) return birth_mean(w, fit.upper() * Gt);
  double slope = tail_slope(w);
  if (slope > 0.0 && fit.mgf_domain_sup() <= slope * Gt && !fit.bounded())
    return kInf;
  double y_hi = fit.bounded() ? fit.upper() : fit.quantile(1.0 - 1e-13) + 20.0;
  auto r = num::integrate(
      [&](double y) { return fit.density(y) * birth_mean(w, y * Gt); }, 0.0,
      y_hi, 1e-9);
  return r.value;
}

double process_laplace(const ProcessSpec& spec, double alpha) {
  if (!(alpha > 0.0))
    throw std::domain_error("process_laplace: alpha must be positive");
  const WeightSequence& w = spec.weights;
  const FitnessDistribution& fit = spec.fitness;
  double slope = tail_slope(w);
  if (is_stationary(spec)) {
    if (!fit.has_density())
      return stationary_laplace(w, alpha / fit.upper());
    if (slope > 0.0 && fit.upper() * slope >= alpha) return kInf;
    double y_hi = fit.bounded() ? fit.upper() : fit.quantile(1.0 - 1e-13) + 20.0;
    auto r = num::integrate(
        [&](double y) {
          if (y <= 0.0) return 0.0;
          return fit.density(y) * stationary_laplace(w, alpha / y);
        },
        0.0, y_hi, 1e-12);
    return r.value;
  }
  double m_inf = limit_mean_offspring(spec);
  double decay = alpha;
  if (!std::isfinite(m_inf)) {
    double rho = late_growth_rate(spec);
    if (!(rho < alpha)) return kInf;
    decay = alpha - rho;
  }
  auto r = num::integrate_semi_inf(
      [&](double t) {
        return alpha * std::exp(-alpha * t) * mean_offspring_at(spec, t);
      },
      0.0, 1e-13 * std::max(1.0, std::min(m_inf, 1e6)), decay);
  return r.value;
}

Verdict supercriticality(const ProcessSpec& spec) {
  Verdict v;
  WeightClass cls = classify_weights(spec.weights);
  if (cls.growth == WeightGrowth::Superlinear) {
    v.regime = Regime::Explosive;
    v.limit_mean_offspring = kInf;
    v.reason =
        "superlinear weights: the reciprocal weight sum converges, so a "
        "single lineage gives birth infinitely often in finite time";
    return v;
  }
  double slope = tail_slope(spec.weights);
  double Ginf = spec.aging.G_inf();
  double xsup = spec.fitness.mgf_domain_sup();
  if (slope > 0.0 && xsup < slope * Ginf) {
    v.regime = Regime::Explosive;
    v.limit_mean_offspring = kInf;
    v.reason =
        "fitness tail too heavy for the weight growth: the mean number of "
        "children is infinite at some finite age";
    return v;
  }
  if (slope == 0.0 && !std::isfinite(spec.fitness.mean()) &&
      cls.growth != WeightGrowth::Sublinear) {
    // unreachable: slope 0 implies sublinear/bounded; kept for clarity
  }
  v.limit_mean_offspring = limit_mean_offspring(spec);
  if (v.limit_mean_offspring <= 1.0) {
    v.regime = Regime::Subcritical;
    v.reason = "limit mean offspring does not exceed one";
  } else {
    v.regime = Regime::Supercritical;
    v.reason = "limit mean offspring exceeds one";
  }
  return v;
}

MalthusianResult malthusian(const ProcessSpec& spec) {
  Verdict v = supercriticality(spec);
  if (v.regime == Regime::Explosive)
    throw RegimeError(v, "no growth rate: the process is explosive (" +
                             v.reason + ")");
  if (v.regime == Regime::Subcritical)
    throw RegimeError(v,
                      "no growth rate: the process is subcritical (limit mean "
                      "offspring <= 1)");
  double floor = alpha_floor(spec, v);
  if (!std::isfinite(floor))
    throw RegimeError(
        v,
        "no growth rate: the transform is infinite for every candidate rate "
        "(unbounded fitness without aging)");
  auto L = [&](double a) { return process_laplace(spec, a); };
  // Probe just above the domain edge; the transform must exceed one there.
  double lo = 0.0;
  bool edge_ok = false;
  if (floor > 0.0) {
    for (int j = 2; j <= 9; ++j) {
      lo = floor * (1.0 + std::pow(10.0, -j));
      double val = L(lo);
      if (std::isfinite(val) && val > 1.0) {
        edge_ok = true;
        break;
      }
    }
  } else {
    lo = 1e-6;
    for (int j = 0; j < 10; ++j, lo *= 0.1) {
      double val = L(lo);
      if (std::isfinite(val) && val > 1.0) {
        edge_ok = true;
        break;
      }
      if (lo < 1e-13) break;
    }
  }
  if (!edge_ok) {
    v.regime = Regime::Subcritical;
    v.reason =
        "transform limit at the edge of its domain does not exceed one";
    throw RegimeError(v, "no growth rate: " + v.reason);
  }
  double hi = std::max(2.0 * (lo - floor) + floor, floor + 1.0);
  int guard = 0;
  while (L(hi) > 1.0) {
    hi = floor + 2.0 * (hi - floor);
    if (++guard > 60)
      throw RegimeError(v, "no growth rate: the transform stays above one");
  }
  double root = num::find_root([&](double a) { return L(a) - 1.0; },
                               {lo, hi}, 1e-14 * (1.0 + hi));
  MalthusianResult res;
  res.alpha = root;
  res.residual = std::abs(L(root) - 1.0);
  double h = std::max(1e-7 * (root - floor), 1e-10);
  res.derivative = (L(root + h) - L(root - h)) / (2.0 * h);
  res.alpha_floor = floor;
  res.verdict = v;
  return res;
}

}  // namespace ctbp
