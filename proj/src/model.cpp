#include "model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "numerics.hpp"

namespace ctbp {

// ---------------------------------------------------------------------------
// Weights

WeightSequence WeightSequence::affine(double a, double b) {
  if (a < 0.0 || b <= 0.0)
    throw std::invalid_argument(
        "AffineWeights requires a >= 0 and b > 0 (every f_k must be positive)");
  WeightSequence w;
  w.family = WeightFamily::Affine;
  w.a = a;
  w.b = b;
  return w;
}

WeightSequence WeightSequence::power(double c, double q, double s0) {
  if (c <= 0.0 || s0 <= 0.0 || q < 0.0)
    throw std::invalid_argument(
        "PowerWeights requires c > 0, shift > 0 and exponent q >= 0");
  WeightSequence w;
  w.family = WeightFamily::Power;
  w.c = c;
  w.q = q;
  w.s0 = s0;
  return w;
}

WeightSequence WeightSequence::custom(std::vector<double> table, double tail_a,
                                      double tail_b) {
  if (table.empty())
    throw std::invalid_argument("CustomWeights requires a non-empty table");
  for (double v : table)
    if (!(v > 0.0))
      throw std::invalid_argument("CustomWeights entries must be positive");
  if (tail_a < 0.0 || tail_b <= 0.0)
    throw std::invalid_argument(
        "CustomWeights tail continuation requires a >= 0 and b > 0");
  WeightSequence w;
  w.family = WeightFamily::Custom;
  w.table = std::move(table);
  w.tail_a = tail_a;
  w.tail_b = tail_b;
  return w;
}

double WeightSequence::operator()(std::size_t k) const {
  switch (family) {
    case WeightFamily::Affine:
      return a * static_cast<double>(k) + b;
    case WeightFamily::Power:
      return c * std::pow(static_cast<double>(k) + s0, q);
    case WeightFamily::Custom:
      if (k < table.size()) return table[k];
      return tail_a * static_cast<double>(k) + tail_b;
  }
  return 0.0;
}

WeightClass classify_weights(const WeightSequence& w) {
  WeightClass out;
  switch (w.family) {
    case WeightFamily::Affine:
      out.growth = (w.a > 0.0) ? WeightGrowth::Linear : WeightGrowth::Sublinear;
      out.recip_sum_finite = false;
      out.recip_sum = kInf;
      out.method = "affine: reciprocal sum diverges";
      return out;
    case WeightFamily::Power: {
      if (w.q > 1.0) {
        out.growth = WeightGrowth::Superlinear;
        out.recip_sum_finite = true;
        // Partial sum plus an integral tail estimate.
        double s = 0.0;
        std::size_t K = 200000;
        for (std::size_t k = 0; k < K; ++k) s += 1.0 / w(k);
        s += std::pow(static_cast<double>(K) + w.s0, 1.0 - w.q) /
             (w.c * (w.q - 1.0));
        out.recip_sum = s;
        out.method = "power: partial sum with integral tail";
      } else {
        out.growth =
            (w.q == 1.0) ? WeightGrowth::Linear : WeightGrowth::Sublinear;
        out.recip_sum_finite = false;
        out.recip_sum = kInf;
        out.method = "power exponent <= 1: reciprocal sum diverges";
      }
      return out;
    }
    case WeightFamily::Custom: {
      // The tail rule is an affine continuation, so the reciprocal sum always
      // diverges; growth class is read off the continuation slope.
      out.growth = (w.tail_a > 0.0) ? WeightGrowth::Linear : WeightGrowth::Sublinear;
      out.recip_sum_finite = false;
      out.recip_sum = kInf;
      out.method = "custom: affine tail continuation, reciprocal sum diverges";
      return out;
    }
  }
  throw std::logic_error("classify_weights: unknown family");
}

// ---------------------------------------------------------------------------
// Aging

AgingFunction AgingFunction::constant() {
  AgingFunction f;
  f.family_ = AgingFamily::Constant;
  f.G_inf_ = kInf;
  return f;
}

AgingFunction AgingFunction::exponential(double lambda) {
  if (!(lambda > 0.0))
    throw std::invalid_argument("ExponentialAging requires lambda > 0");
  AgingFunction f;
  f.family_ = AgingFamily::Exponential;
  f.lambda_ = lambda;
  f.G_inf_ = 1.0 / lambda;
  return f;
}

AgingFunction AgingFunction::power(double lambda) {
  if (!(lambda > 1.0))
    throw std::invalid_argument("PowerAging requires lambda > 1");
  AgingFunction f;
  f.family_ = AgingFamily::Power;
  f.lambda_ = lambda;
  f.G_inf_ = 1.0 / (lambda - 1.0);
  return f;
}

AgingFunction AgingFunction::lognormal(double l1, double l2, double l3,
                                       bool normalize_total) {
  if (!(l1 > 0.0) || !(l2 > 0.0))
    throw std::invalid_argument(
        "LognormalAging requires positive amplitude and positive curvature");
  AgingFunction f;
  f.family_ = AgingFamily::Lognormal;
  f.l1_ = l1;
  f.l2_ = l2;
  f.l3_ = l3;
  // G(t) has a closed form: substituting u = log(1+t) turns the integral into
  // a Gaussian one, giving an erf expression.
  f.ln_m_ = l3 + 0.5 / l2;
  f.ln_pref_ = l1 * std::exp(l3 + 0.25 / l2) * 0.5 * std::sqrt(M_PI / l2);
  double ginf = f.ln_pref_ * (1.0 + std::erf(std::sqrt(l2) * f.ln_m_));
  if (normalize_total) {
    f.l1_ /= ginf;
    f.ln_pref_ /= ginf;
    ginf = 1.0;
  }
  f.G_inf_ = ginf;
  return f;
}

double AgingFunction::g(double t) const {
  switch (family_) {
    case AgingFamily::Constant:
      return 1.0;
    case AgingFamily::Exponential:
      return std::exp(-lambda_ * t);
    case AgingFamily::Power:
      return std::pow(1.0 + t, -lambda_);
    case AgingFamily::Lognormal: {
      double u = std::log1p(t) - l3_;
      return l1_ * std::exp(-l2_ * u * u);
    }
  }
  return 0.0;
}

double AgingFunction::dg(double t) const {
  switch (family_) {
    case AgingFamily::Constant:
      return 0.0;
    case AgingFamily::Exponential:
      return -lambda_ * std::exp(-lambda_ * t);
    case AgingFamily::Power:
      return -lambda_ * std::pow(1.0 + t, -lambda_ - 1.0);
    case AgingFamily::Lognormal: {
      double u = std::log1p(t) - l3_;
      return g(t) * (-2.0 * l2_ * u / (1.0 + t));
    }
  }
  return 0.0;
}

double AgingFunction::G(double t) const {
  switch (family_) {
    case AgingFamily::Constant:
      return t;
    case AgingFamily::Exponential:
      return -std::expm1(-lambda_ * t) / lambda_;
    case AgingFamily::Power:
      return -std::expm1((1.0 - lambda_) * std::log1p(t)) / (lambda_ - 1.0);
    case AgingFamily::Lognormal: {
      double u = std::log1p(t);
      double sl = std::sqrt(l2_);
      return ln_pref_ * (std::erf(sl * (u - ln_m_)) + std::erf(sl * ln_m_));
    }
  }
  return 0.0;
}

double AgingFunction::G_inv(double u) const {
  if (u < 0.0 || u >= G_inf_)
    throw std::domain_error("G_inv: argument outside [0, G_inf)");
  switch (family_) {
    case AgingFamily::Constant:
      return u;
    case AgingFamily::Exponential:
      return -std::log1p(-lambda_ * u) / lambda_;
    case AgingFamily::Power:
      return std::expm1(std::log1p(-(lambda_ - 1.0) * u) / (1.0 - lambda_));
    case AgingFamily::Lognormal: {
      if (u == 0.0) return 0.0;
      // Bracket geometrically, then bisect with Newton polish.
      double hi = 1.0;
      while (G(hi) < u && hi < 1e300) hi *= 2.0;
      double lo = (hi > 1.0) ? hi * 0.5 : 0.0;
      for (int i = 0; i < 200; ++i) {
        double mid = 0.5 * (lo + hi);
        if (G(mid) < u)
          lo = mid;
        else
          hi = mid;
        if (hi - lo <= 1e-15 * (1.0 + hi)) break;
      }
      double t = 0.5 * (lo + hi);
      for (int i = 0; i < 3; ++i) {
        double gr = g(t);
        if (gr <= 0.0) break;
        double step = (G(t) - u) / gr;
        double tn = t - step;
        if (tn >= lo && tn <= hi) t = tn;
      }
      return t;
    }
  }
  return 0.0;
}

// ---------------------------------------------------------------------------
// Fitness

FitnessDistribution FitnessDistribution::degenerate(double value) {
  if (!(value > 0.0))
    throw std::invalid_argument("DegenerateFitness requires a positive value");
  FitnessDistribution f;
  f.family_ = FitnessFamily::Degenerate;
  f.value_ = value;
  f.upper_ = value;
  return f;
}

FitnessDistribution FitnessDistribution::bounded_uniform(double upper) {
  if (!(upper > 0.0))
    throw std::invalid_argument("BoundedUniformFitness requires upper > 0");
  FitnessDistribution f;
  f.family_ = FitnessFamily::BoundedUniform;
  f.upper_ = upper;
  f.norm_ = 1.0 / upper;
  return f;
}

FitnessDistribution FitnessDistribution::exponential(double theta) {
  if (!(theta > 0.0))
    throw std::invalid_argument("ExponentialFitness requires theta > 0");
  FitnessDistribution f;
  f.family_ = FitnessFamily::Exponential;
  f.theta_ = theta;
  f.norm_ = theta;
  return f;
}

FitnessDistribution FitnessDistribution::general_exponential(double shape,
                                                             double theta) {
  if (!(shape >= 1.0) || !(theta > 0.0))
    throw std::invalid_argument(
        "GeneralExponentialFitness requires shape >= 1 and theta > 0");
  FitnessDistribution f;
  f.family_ = FitnessFamily::GeneralExponential;
  f.shape_ = shape;
  f.theta_ = theta;
  // stored in log space: the linear-space constant overflows for large shape
  f.norm_ = shape * std::log(theta) - std::lgamma(shape);
  return f;
}

FitnessDistribution FitnessDistribution::sub_exponential(double theta,
                                                         double eps) {
  if (!(theta > 0.0) || !(eps > 0.0))
    throw std::invalid_argument(
        "SubExponentialFitness requires theta > 0 and eps > 0");
  FitnessDistribution f;
  f.family_ = FitnessFamily::SubExponential;
  f.theta_ = theta;
  f.eps_ = eps;
  double p = 1.0 + eps;
  f.norm_ = p * std::pow(theta, 1.0 / p) / std::tgamma(1.0 / p);
  return f;
}

FitnessDistribution FitnessDistribution::pareto(double alpha, double xm) {
  if (!(alpha > 0.0) || !(xm > 0.0))
    throw std::invalid_argument("ParetoFitness requires alpha > 0 and xm > 0");
  FitnessDistribution f;
  f.family_ = FitnessFamily::Pareto;
  f.alpha_ = alpha;
  f.xm_ = xm;
  f.norm_ = alpha * std::pow(xm, alpha);
  return f;
}

bool FitnessDistribution::is_degenerate_one() const {
  return family_ == FitnessFamily::Degenerate && value_ == 1.0;
}

double FitnessDistribution::mgf(double x) const {
  switch (family_) {
    case FitnessFamily::Degenerate:
      return std::exp(value_ * x);
    case FitnessFamily::BoundedUniform:
      if (x == 0.0) return 1.0;
      return std::expm1(upper_ * x) / (upper_ * x);
    case FitnessFamily::Exponential:
      return (x < theta_) ? theta_ / (theta_ - x) : kInf;
    case FitnessFamily::GeneralExponential:
      return (x < theta_) ? std::pow(theta_ / (theta_ - x), shape_) : kInf;
    case FitnessFamily::SubExponential: {
      if (x <= 0.0 && x > -1e300) {
        // still finite; fall through to quadrature
      }
      double p = 1.0 + eps_;
      // Peak of x s - theta s^p at s* = (x / (theta p))^(1/eps).
      double s_star =
          (x > 0.0) ? std::pow(x / (theta_ * p), 1.0 / eps_) : 0.0;
      double s_hi = s_star + 1.0;
      auto expo = [&](double s) { return x * s - theta_ * std::pow(s, p); };
      double emax = (x > 0.0) ? expo(s_star) : 0.0;
      while (expo(s_hi) - emax > -60.0) s_hi *= 1.5;
      auto f = [&](double s) { return norm_ * std::exp(expo(s) - emax); };
      auto r = ctbp::num::integrate(f, 0.0, s_hi, 1e-12);
      return r.value * std::exp(emax);
    }
    case FitnessFamily::Pareto:
      return (x > 0.0) ? kInf : 1.0;  // only evaluated at x >= 0
  }
  return kInf;
}

double FitnessDistribution::mgf_domain_sup() const {
  switch (family_) {
    case FitnessFamily::Degenerate:
    case FitnessFamily::BoundedUniform:
    case FitnessFamily::SubExponential:
      return kInf;
    case FitnessFamily::Exponential:
    case FitnessFamily::GeneralExponential:
      return theta_;
    case FitnessFamily::Pareto:
      return 0.0;
  }
  return 0.0;
}

double FitnessDistribution::mean() const {
  switch (family_) {
    case FitnessFamily::Degenerate:
      return value_;
    case FitnessFamily::BoundedUniform:
      return 0.5 * upper_;
    case FitnessFamily::Exponential:
      return 1.0 / theta_;
    case FitnessFamily::GeneralExponential:
      return shape_ / theta_;
    case FitnessFamily::SubExponential: {
      double p = 1.0 + eps_;
      return std::tgamma(2.0 / p) /
             (std::tgamma(1.0 / p) * std::pow(theta_, 1.0 / p));
    }
    case FitnessFamily::Pareto:
      return (alpha_ > 1.0) ? alpha_ * xm_ / (alpha_ - 1.0) : kInf;
  }
  return 0.0;
}

bool FitnessDistribution::has_density() const {
  return family_ != FitnessFamily::Degenerate;
}

double FitnessDistribution::density(double s) const {
  switch (family_) {
    case FitnessFamily::Degenerate:
      throw std::logic_error("DegenerateFitness has no density");
    case FitnessFamily::BoundedUniform:
      return (s >= 0.0 && s <= upper_) ? norm_ : 0.0;
    case FitnessFamily::Exponential:
      return (s >= 0.0) ? norm_ * std::exp(-theta_ * s) : 0.0;
    case FitnessFamily::GeneralExponential:
      return (s > 0.0) ? std::exp(norm_ + (shape_ - 1.0) * std::log(s) -
                                  theta_ * s)
                       : 0.0;
    case FitnessFamily::SubExponential:
      return (s >= 0.0)
                 ? norm_ * std::exp(-theta_ * std::pow(s, 1.0 + eps_))
                 : 0.0;
    case FitnessFamily::Pareto:
      return (s >= xm_) ? norm_ * std::pow(s, -alpha_ - 1.0) : 0.0;
  }
  return 0.0;
}

double FitnessDistribution::dlog_density(double s) const {
  switch (family_) {
    case FitnessFamily::BoundedUniform:
      return 0.0;
    case FitnessFamily::Exponential:
      return -theta_;
    case FitnessFamily::GeneralExponential:
      return (shape_ - 1.0) / s - theta_;
    case FitnessFamily::SubExponential:
      return -theta_ * (1.0 + eps_) * std::pow(s, eps_);
    case FitnessFamily::Pareto:
      return -(alpha_ + 1.0) / s;
    default:
      throw std::logic_error("dlog_density: density-free family");
  }
}

double FitnessDistribution::d2log_density(double s) const {
  switch (family_) {
    case FitnessFamily::BoundedUniform:
    case FitnessFamily::Exponential:
      return 0.0;
    case FitnessFamily::GeneralExponential:
      return -(shape_ - 1.0) / (s * s);
    case FitnessFamily::SubExponential:
      return -theta_ * (1.0 + eps_) * eps_ * std::pow(s, eps_ - 1.0);
    case FitnessFamily::Pareto:
      return (alpha_ + 1.0) / (s * s);
    default:
      throw std::logic_error("d2log_density: density-free family");
  }
}

struct FitnessDistribution::QuantileTable {
  std::vector<double> s;
  std::vector<double> cdf;
};

const FitnessDistribution::QuantileTable& FitnessDistribution::table() const {
  if (table_) return *table_;
  auto tab = std::make_shared<QuantileTable>();
  // Choose a right endpoint with tail mass far below table resolution.
  double s_hi;
  if (family_ == FitnessFamily::GeneralExponential)
    s_hi = (shape_ + 45.0 + 10.0 * std::sqrt(shape_)) / theta_;
  else
    s_hi = std::pow(45.0 / theta_, 1.0 / (1.0 + eps_));
  const int n = 4096;
  tab->s.resize(n + 1);
  tab->cdf.resize(n + 1);
  double acc = 0.0;
  tab->s[0] = 0.0;
  tab->cdf[0] = 0.0;
  double prev = density(0.0);
  for (int i = 1; i <= n; ++i) {
    double si = s_hi * i / n;
    double mid = density(si - 0.5 * s_hi / n);
    double cur = density(si);
    acc += (s_hi / n) * (prev + 4.0 * mid + cur) / 6.0;  // Simpson
    tab->s[i] = si;
    tab->cdf[i] = acc;
    prev = cur;
  }
  for (double& c : tab->cdf) c /= acc;
  table_ = std::move(tab);
  return *table_;
}

double FitnessDistribution::quantile(double u) const {
  if (!(u >= 0.0 && u < 1.0))
    throw std::domain_error("quantile: u must lie in [0, 1)");
  switch (family_) {
    case FitnessFamily::Degenerate:
      return value_;
    case FitnessFamily::BoundedUniform:
      return upper_ * u;
    case FitnessFamily::Exponential:
      return -std::log1p(-u) / theta_;
    case FitnessFamily::Pareto:
      return xm_ * std::pow(1.0 - u, -1.0 / alpha_);
    case FitnessFamily::GeneralExponential:
    case FitnessFamily::SubExponential: {
      const QuantileTable& t = table();
      auto it = std::lower_bound(t.cdf.begin(), t.cdf.end(), u);
      std::size_t i = static_cast<std::size_t>(it - t.cdf.begin());
      if (i == 0) return 0.0;
      if (i >= t.cdf.size()) return t.s.back();
      double c0 = t.cdf[i - 1], c1 = t.cdf[i];
      double w = (c1 > c0) ? (u - c0) / (c1 - c0) : 0.5;
      return t.s[i - 1] + w * (t.s[i] - t.s[i - 1]);
    }
  }
  return 0.0;
}

FitnessTail FitnessDistribution::tail() const {
  switch (family_) {
    case FitnessFamily::Degenerate:
    case FitnessFamily::BoundedUniform:
      return FitnessTail::Bounded;
    case FitnessFamily::Exponential:
    case FitnessFamily::GeneralExponential:
      return FitnessTail::ExponentialTail;
    case FitnessFamily::SubExponential:
      return FitnessTail::SubExponentialTail;
    case FitnessFamily::Pareto:
      return FitnessTail::HeavyTail;
  }
  return FitnessTail::Bounded;
}

}  // namespace ctbp
