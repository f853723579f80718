#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <vector>

#include "../src/asymptotics.hpp"
#include "../src/degree.hpp"
#include "../src/malthus.hpp"
#include "../src/numerics.hpp"
#include "doctest.h"

using namespace ctbp;

namespace {

ProcessSpec aging_spec(double a, double b, double lambda) {
  ProcessSpec s;
  s.weights = WeightSequence::affine(a, b);
  s.aging = AgingFunction::exponential(lambda);
  return s;
}

}  // namespace

TEST_CASE("age saddle satisfies the stationarity and curvature conditions") {
  ProcessSpec s = aging_spec(1.0, 1.0, 0.5);
  double alpha = malthusian(s).alpha;
  for (std::size_t k : {5, 50, 200, 5000}) {
    Saddle1D sd = saddle_age(s, alpha, k);
    CHECK(sd.valid);
    CHECK(std::abs(psi_age_deriv(s, alpha, k, sd.t_k)) <= 1e-9);
    CHECK(sd.second_deriv > 0.0);
    CHECK(sd.t_k > 0.0);
  }
}

TEST_CASE("age saddle grows logarithmically for exponential aging") {
  ProcessSpec s = aging_spec(1.0, 1.0, 1.0);
  double alpha = malthusian(s).alpha;
  std::vector<double> ratio;
  for (double k : {1e3, 1e4, 1e5})
    ratio.push_back(saddle_age(s, alpha, (std::size_t)k).t_k / std::log(k));
  for (double r : ratio) CHECK(r == doctest::Approx(1.0).epsilon(0.25));
  // successive ratios approach 1
  CHECK(std::abs(ratio[2] - 1.0) < std::abs(ratio[1] - 1.0));
  CHECK(std::abs(ratio[1] - 1.0) < std::abs(ratio[0] - 1.0));
  CHECK(std::abs(ratio[2] - ratio[1]) < 0.05 * ratio[1]);
}

TEST_CASE("age saddle follows the k^(1/lambda) law for power-law aging") {
  ProcessSpec s;
  s.weights = WeightSequence::affine(1.0, 1.0);
  s.aging = AgingFunction::power(2.0);
  double alpha = malthusian(s).alpha;
  std::vector<double> ratio;
  for (double k : {1e3, 1e4, 1e5}) {
    double tk = saddle_age(s, alpha, (std::size_t)k).t_k;
    ratio.push_back((1.0 + tk) / std::sqrt(k));
  }
  for (double r : ratio)
    CHECK(r == doctest::Approx(ratio.back()).epsilon(0.10));
}

TEST_CASE("closed-form age derivative matches central differences") {
  ProcessSpec s = aging_spec(1.0, 2.0, 0.7);
  double alpha = 1.3;
  std::size_t k = 37;
  for (double t : {0.13, 0.9, 2.7, 6.4}) {
    double h = 1e-6 * (1.0 + t);
    double fd =
        (psi_age(s, alpha, k, t + h) - psi_age(s, alpha, k, t - h)) / (2 * h);
    CHECK(psi_age_deriv(s, alpha, k, t) ==
          doctest::Approx(fd).epsilon(1e-6));
  }
}

TEST_CASE("age curvature matches second differences") {
  ProcessSpec s = aging_spec(1.0, 2.0, 0.7);
  double alpha = 1.3;
  std::size_t k = 37;
  for (double t : {0.5, 1.8, 4.0}) {
    double h = 1e-4 * (1.0 + t);
    double fd = (psi_age(s, alpha, k, t + h) - 2.0 * psi_age(s, alpha, k, t) +
                 psi_age(s, alpha, k, t - h)) /
                (h * h);
    CHECK(psi_age_curvature(s, alpha, k, t) ==
          doctest::Approx(k * fd).epsilon(1e-5));
  }
}

TEST_CASE("age asymptotics track the quadrature distribution") {
  ProcessSpec s = aging_spec(1.0, 1.0, 0.5);
  double alpha = malthusian(s).alpha;
  auto quad = aging_pk(s, alpha, 400);
  std::vector<double> ratio;
  for (std::size_t k : {100, 150, 200, 300, 400})
    ratio.push_back(asymptotic_pk_age(s, alpha, k) / quad.p[k]);
  for (double r : ratio) {
    CHECK(r > 0.5);
    CHECK(r < 2.0);
  }
  for (double r : ratio)
    CHECK(std::abs(r / ratio.front() - 1.0) < 0.20);
}

TEST_CASE("gaussian boundary factor stays between one half and one") {
  ProcessSpec s = aging_spec(1.0, 1.0, 0.5);
  double alpha = malthusian(s).alpha;
  for (std::size_t k : {2, 10, 100, 1000, 100000}) {
    Saddle1D sd = saddle_age(s, alpha, k);
    double phi = num::normal_cdf(sd.t_k * std::sqrt(sd.second_deriv));
    CHECK(phi >= 0.5);
    CHECK(phi <= 1.0);
  }
}

TEST_CASE("exponential-aging asymptotics carry a power-law residual") {
  // Removing the Gamma-ratio and the geometric factor from log p_k leaves a
  // k^{-alpha} residual; the fitted slope recovers the growth rate.
  ProcessSpec s = aging_spec(1.0, 1.0, 1.0);
  double alpha = malthusian(s).alpha;
  double ba = s.weights.b / s.weights.a;
  double log_geom = std::log(-std::expm1(-s.weights.a * s.aging.G_inf()));
  std::vector<double> xs, ys;
  for (double k = 2000; k <= 64000; k *= 2) {
    std::size_t ki = (std::size_t)k;
    double lp = log_asymptotic_pk_age(s, alpha, ki);
    double lgam = num::log_gamma(k + ba) - num::log_gamma(ba) -
                  num::log_gamma(k + 1.0);
    xs.push_back(std::log(k));
    ys.push_back(lp - lgam - k * log_geom);
  }
  double n = xs.size(), sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  CHECK(-slope == doctest::Approx(alpha).epsilon(0.1 / alpha));
}

TEST_CASE("joint saddle zeroes both partial derivatives") {
  ProcessSpec s = aging_spec(1.0, 1.0, 1.0);
  s.fitness = FitnessDistribution::exponential(1.5);
  double alpha = malthusian(s).alpha;
  for (std::size_t k : {10, 100, 1000, 100000}) {
    Saddle2D sd = saddle_age_fitness(s, alpha, k);
    CHECK(sd.valid);
    double dt, ds;
    psi_age_fitness_grad(s, alpha, k, sd.t_k, sd.s_k, &dt, &ds);
    CHECK(std::abs(dt) <= 1e-8);
    CHECK(std::abs(ds) <= 1e-8);
    CHECK(sd.hessian[0][0] > 0.0);
    CHECK(sd.determinant > 0.0);
  }
}

TEST_CASE("joint saddle fitness coordinate is logarithmic in k") {
  ProcessSpec s = aging_spec(1.0, 1.0, 1.0);
  s.fitness = FitnessDistribution::exponential(1.5);
  double alpha = malthusian(s).alpha;
  double prev_gap = 1.0;
  for (double k : {1e3, 1e4, 1e5}) {
    Saddle2D sd = saddle_age_fitness(s, alpha, (std::size_t)k);
    double ratio =
        sd.s_k * s.weights.a * s.aging.G(sd.t_k) / std::log(k);
    CHECK(ratio > 0.8);
    CHECK(ratio < 1.05);
    CHECK(std::abs(ratio - 1.0) < prev_gap);
    prev_gap = std::abs(ratio - 1.0);
  }
}

TEST_CASE("joint saddle satisfies the fitness-age balance identity") {
  // At the saddle s_k g(t_k) converges to alpha G_inf / theta.
  ProcessSpec s = aging_spec(1.0, 1.0, 1.0);
  s.fitness = FitnessDistribution::exponential(1.5);
  double alpha = malthusian(s).alpha;
  Saddle2D sd = saddle_age_fitness(s, alpha, 100000);
  double limit = alpha * s.aging.G_inf() / 1.5;
  CHECK(sd.s_k * s.aging.g(sd.t_k) == doctest::Approx(limit).epsilon(0.05));
}

TEST_CASE("joint hessian matches finite differences at the saddle") {
  ProcessSpec s = aging_spec(1.0, 1.0, 1.0);
  s.fitness = FitnessDistribution::exponential(1.5);
  double alpha = malthusian(s).alpha;
  std::size_t k = 1000;
  Saddle2D sd = saddle_age_fitness(s, alpha, k);
  auto psi = [&](double t, double ss) {
    return psi_age_fitness(s, alpha, k, t, ss);
  };
  double t = sd.t_k, u = sd.s_k;
  double ht = 1e-4 * (1.0 + t), hs = 1e-4 * (1.0 + u);
  double kd = (double)k;
  double fd_tt =
      kd * (psi(t + ht, u) - 2 * psi(t, u) + psi(t - ht, u)) / (ht * ht);
  double fd_ss =
      kd * (psi(t, u + hs) - 2 * psi(t, u) + psi(t, u - hs)) / (hs * hs);
  double fd_ts = kd *
                 (psi(t + ht, u + hs) - psi(t + ht, u - hs) -
                  psi(t - ht, u + hs) + psi(t - ht, u - hs)) /
                 (4 * ht * hs);
  CHECK(sd.hessian[0][0] == doctest::Approx(fd_tt).epsilon(1e-5));
  CHECK(sd.hessian[1][1] == doctest::Approx(fd_ss).epsilon(1e-5));
  CHECK(sd.hessian[0][1] == doctest::Approx(fd_ts).epsilon(1e-5));
}

TEST_CASE("joint asymptotics track the exponential-fitness quadrature") {
  ProcessSpec s = aging_spec(1.0, 1.0, 1.0);
  s.fitness = FitnessDistribution::exponential(1.5);
  double alpha = malthusian(s).alpha;
  auto quad = expfit_pk(s, alpha, 1000);
  std::vector<double> ratio;
  for (std::size_t k : {100, 200, 400, 700, 1000})
    ratio.push_back(asymptotic_pk_age_fitness(s, alpha, k) / quad.p[k]);
  for (double r : ratio)
    CHECK(std::abs(r / ratio.front() - 1.0) < 0.25);
}

TEST_CASE("sharply peaked fitness reproduces the fixed-fitness asymptotics") {
  ProcessSpec sharp = aging_spec(1.0, 1.0, 1.0);
  sharp.fitness = FitnessDistribution::general_exponential(1e5, 1e5);
  ProcessSpec fixed = aging_spec(1.0, 1.0, 1.0);
  double a_sharp = malthusian(sharp).alpha;
  double a_fixed = malthusian(fixed).alpha;
  for (std::size_t k : {100, 200, 400}) {
    double p2 = asymptotic_pk_age_fitness(sharp, a_sharp, k);
    double p1 = asymptotic_pk_age(fixed, a_fixed, k);
    CHECK(p2 / p1 > 0.5);
    CHECK(p2 / p1 < 2.0);
  }
}

TEST_CASE("tail prediction distinguishes the fitness classes") {
  ProcessSpec s = aging_spec(1.0, 1.0, 1.0);
  s.fitness = FitnessDistribution::exponential(1.5);
  TailPrediction p = predicted_tail(s);
  CHECK(p.tail_class == TailClass::PowerLaw);
  CHECK(p.exponent == doctest::Approx(2.5));

  ProcessSpec sub = aging_spec(1.0, 2.0, 1.0);
  sub.fitness = FitnessDistribution::sub_exponential(1.0, 1.0);
  TailPrediction q = predicted_tail(sub);
  CHECK(q.tail_class == TailClass::StretchedExponential);
  CHECK(q.stretch_power == doctest::Approx(2.0));
  CHECK(q.stretch_rate == doctest::Approx(1.0));

  ProcessSpec fixed = aging_spec(1.0, 1.0, 1.0);
  TailPrediction r = predicted_tail(fixed);
  CHECK(r.tail_class == TailClass::ExponentialTruncation);
  CHECK(r.truncation_rate ==
        doctest::Approx(-std::log(1.0 - std::exp(-1.0))));

  ProcessSpec heavy = aging_spec(1.0, 1.0, 1.0);
  heavy.fitness = FitnessDistribution::pareto(2.5);
  TailPrediction h = predicted_tail(heavy);
  CHECK(h.tail_class == TailClass::Explosive);
}

TEST_CASE("saddle solvers reject unsupported specifications") {
  ProcessSpec plain;  // constant aging is not integrable
  plain.weights = WeightSequence::affine(1.0, 1.0);
  CHECK_THROWS_AS(saddle_age(plain, 2.0, 10), std::invalid_argument);

  ProcessSpec nofit = aging_spec(1.0, 1.0, 1.0);  // degenerate fitness
  CHECK_THROWS_AS(saddle_age_fitness(nofit, 0.5, 10), std::invalid_argument);

  ProcessSpec powerw = aging_spec(1.0, 1.0, 1.0);
  powerw.weights = WeightSequence::power(1.0, 1.5);
  CHECK_THROWS_AS(saddle_age(powerw, 0.5, 10), std::invalid_argument);
}
