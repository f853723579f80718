#pragma once
#include <cstdint>
#include <limits>
#include <memory>
#include <string>
#include <vector>

namespace ctbp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// ---------------------------------------------------------------------------
// Attachment weights f_k: rate at which an individual with k children
// produces its next child (before aging / fitness modulation).

enum class WeightFamily { Affine, Power, Custom };

struct WeightSequence {
  WeightFamily family = WeightFamily::Affine;
  double a = 1.0, b = 1.0;            // affine: a*k + b
  double c = 1.0, q = 2.0, s0 = 1.0;  // power: c*(k + s0)^q
  std::vector<double> table;          // custom head
  double tail_a = 0.0, tail_b = 1.0;  // affine continuation past the table

  static WeightSequence affine(double a, double b);
  static WeightSequence power(double c, double q, double s0 = 1.0);
  static WeightSequence custom(std::vector<double> table, double tail_a,
                               double tail_b);

  double operator()(std::size_t k) const;
  bool is_affine() const { return family == WeightFamily::Affine; }
};

enum class WeightGrowth { Sublinear, Linear, Superlinear };

struct WeightClass {
  WeightGrowth growth;
  bool recip_sum_finite;   // sum of 1/f_k converges
  double recip_sum;        // value when finite (extrapolated), else +inf
  std::string method;
};

WeightClass classify_weights(const WeightSequence& w);

// ---------------------------------------------------------------------------
// Aging profile g(t) >= 0 with cumulative G(t); the process born at rate
// f_k * g(age).  Integrable profiles (finite G at infinity) freeze degrees.

enum class AgingFamily { Constant, Exponential, Power, Lognormal };

class AgingFunction {
 public:
  static AgingFunction constant();
  static AgingFunction exponential(double lambda);
  static AgingFunction power(double lambda);
  static AgingFunction lognormal(double l1, double l2, double l3,
                                 bool normalize_total = false);

  double g(double t) const;
  double dg(double t) const;  // g'(t)
  double G(double t) const;
  double G_inv(double u) const;  // inverse of G on [0, G_inf)
  double G_inf() const { return G_inf_; }
  bool integrable() const { return G_inf_ < kInf; }
  AgingFamily family() const { return family_; }
  double lambda() const { return lambda_; }

 private:
  AgingFunction() = default;
  AgingFamily family_ = AgingFamily::Constant;
  double lambda_ = 1.0;              // exponential / power rate
  double l1_ = 1.0, l2_ = 1.0, l3_ = 0.0;  // lognormal parameters
  double G_inf_ = kInf;
  double ln_pref_ = 0.0;  // lognormal closed-form prefactor
  double ln_m_ = 0.0;     // lognormal shifted mode in log-time
};

// ---------------------------------------------------------------------------
// Fitness multiplier Y: individual with fitness y and k children reproduces
// at rate y * f_k * g(age).

enum class FitnessFamily {
  Degenerate,
  BoundedUniform,
  Exponential,
  GeneralExponential,  // Gamma-type density ~ s^(p-1) exp(-theta s)
  SubExponential,      // density ~ exp(-theta s^(1+eps))
  Pareto
};

enum class FitnessTail { Bounded, ExponentialTail, SubExponentialTail, HeavyTail };

class FitnessDistribution {
 public:
  static FitnessDistribution degenerate(double value = 1.0);
  static FitnessDistribution bounded_uniform(double upper);
  static FitnessDistribution exponential(double theta);
  static FitnessDistribution general_exponential(double shape, double theta);
  static FitnessDistribution sub_exponential(double theta, double eps);
  static FitnessDistribution pareto(double alpha, double xm = 1.0);

  FitnessFamily family() const { return family_; }
  double theta() const { return theta_; }
  double shape() const { return shape_; }
  double eps() const { return eps_; }
  double upper() const { return upper_; }  // +inf when unbounded
  bool bounded() const { return upper_ < kInf; }
  bool is_degenerate_one() const;

  // Moment generating function E[exp(x Y)]; +inf when divergent.
  double mgf(double x) const;
  // sup of the set where the mgf is finite (0 for heavy tails).
  double mgf_domain_sup() const;
  double mean() const;

  bool has_density() const;
  double density(double s) const;
  double dlog_density(double s) const;   // d/ds log density
  double d2log_density(double s) const;  // second derivative of log density
  double density_support_sup() const { return upper_; }

  double quantile(double u) const;  // u in [0,1)
  FitnessTail tail() const;

 private:
  FitnessDistribution() = default;
  struct QuantileTable;
  const QuantileTable& table() const;

  FitnessFamily family_ = FitnessFamily::Degenerate;
  double value_ = 1.0;
  double theta_ = 1.0, shape_ = 1.0, eps_ = 1.0;
  double alpha_ = 2.0, xm_ = 1.0;
  double upper_ = kInf;
  double norm_ = 1.0;  // density normalisation constant
  mutable std::shared_ptr<QuantileTable> table_;
};

// ---------------------------------------------------------------------------

struct ProcessSpec {
  WeightSequence weights = WeightSequence::affine(1.0, 1.0);
  AgingFunction aging = AgingFunction::constant();
  FitnessDistribution fitness = FitnessDistribution::degenerate();

  bool plain() const {  // no aging, no fitness
    return !aging.integrable() && aging.family() == AgingFamily::Constant &&
           fitness.is_degenerate_one();
  }
};

}  // namespace ctbp
