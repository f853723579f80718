#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "model.hpp"
#include "numerics.hpp"

using namespace ctbp;

TEST_CASE("weight sequences evaluate and validate") {
  auto w = WeightSequence::affine(2.0, 0.5);
  CHECK(w(0) == 0.5);
  CHECK(w(10) == 20.5);
  CHECK(w.is_affine());
  CHECK_THROWS_AS(WeightSequence::affine(1.0, 0.0), std::invalid_argument);

  auto p = WeightSequence::power(1.0, 2.0);
  CHECK(p(3) == 16.0);

  auto c = WeightSequence::custom({5.0, 1.0, 7.0}, 1.0, 1.0);
  CHECK(c(1) == 1.0);
  CHECK(c(3) == 4.0);  // affine continuation
  CHECK_THROWS_AS(WeightSequence::custom({1.0, -1.0}, 1.0, 1.0),
                  std::invalid_argument);
}

TEST_CASE("weight growth classification") {
  CHECK(classify_weights(WeightSequence::affine(1.0, 1.0)).growth ==
        WeightGrowth::Linear);
  CHECK(classify_weights(WeightSequence::affine(0.0, 2.0)).growth ==
        WeightGrowth::Sublinear);
  auto sup = classify_weights(WeightSequence::power(1.0, 2.0));
  CHECK(sup.growth == WeightGrowth::Superlinear);
  CHECK(sup.recip_sum_finite);
  // sum over k of 1/(k+1)^2 = pi^2/6
  CHECK(sup.recip_sum == doctest::Approx(M_PI * M_PI / 6.0).epsilon(1e-8));
  CHECK(classify_weights(WeightSequence::power(1.0, 0.5)).growth ==
        WeightGrowth::Sublinear);
  CHECK(classify_weights(WeightSequence::custom({3.0}, 1.0, 1.0)).growth ==
        WeightGrowth::Linear);
}

TEST_CASE("aging cumulative matches numerically integrated profile") {
  std::vector<AgingFunction> fams = {
      AgingFunction::exponential(0.7), AgingFunction::power(2.5),
      AgingFunction::lognormal(1.0, 0.5, 1.0), AgingFunction::constant()};
  for (const auto& ag : fams) {
    for (double t : {0.3, 1.0, 4.0}) {
      auto r = num::integrate([&](double s) { return ag.g(s); }, 0.0, t, 1e-12);
      CHECK(ag.G(t) == doctest::Approx(r.value).epsilon(1e-10));
    }
  }
}

TEST_CASE("aging inverse is a two-sided identity") {
  std::vector<AgingFunction> fams = {
      AgingFunction::exponential(1.3), AgingFunction::power(1.7),
      AgingFunction::lognormal(0.8, 1.1, 0.4), AgingFunction::constant()};
  for (const auto& ag : fams) {
    for (double t : {1e-6, 0.1, 1.0, 3.0, 8.0}) {
      double u = ag.G(t);
      CHECK(ag.G_inv(u) == doctest::Approx(t).epsilon(1e-8));
    }
    // Deep in the saturated regime only the G-space roundtrip is exact.
    double u9 = ag.integrable() ? 0.999 * ag.G_inf() : 50.0;
    CHECK(ag.G(ag.G_inv(u9)) == doctest::Approx(u9).epsilon(1e-10));
    CHECK_THROWS_AS(ag.G_inv(-0.1), std::domain_error);
    if (ag.integrable())
      CHECK_THROWS_AS(ag.G_inv(ag.G_inf() * 1.0001), std::domain_error);
  }
}

TEST_CASE("aging totals and validation") {
  CHECK(AgingFunction::exponential(2.0).G_inf() == doctest::Approx(0.5));
  CHECK(AgingFunction::power(3.0).G_inf() == doctest::Approx(0.5));
  CHECK(!AgingFunction::constant().integrable());
  CHECK_THROWS_WITH_AS(AgingFunction::power(1.0),
                       "PowerAging requires lambda > 1",
                       std::invalid_argument);
  CHECK_THROWS_AS(AgingFunction::exponential(0.0), std::invalid_argument);

  auto ln = AgingFunction::lognormal(1.0, 2.0, 0.5, /*normalize_total=*/true);
  CHECK(ln.G_inf() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(ln.G(1e9) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("aging derivative matches finite differences") {
  auto ln = AgingFunction::lognormal(1.0, 0.7, 0.9);
  for (double t : {0.2, 1.0, 2.5, 6.0}) {
    double h = 1e-6;
    double fd = (ln.g(t + h) - ln.g(t - h)) / (2.0 * h);
    CHECK(ln.dg(t) == doctest::Approx(fd).epsilon(1e-6));
  }
}

TEST_CASE("fitness moment generating functions") {
  CHECK(FitnessDistribution::degenerate(1.0).mgf(0.7) ==
        doctest::Approx(std::exp(0.7)));
  CHECK(FitnessDistribution::bounded_uniform(2.0).mgf(0.0) == 1.0);
  CHECK(FitnessDistribution::bounded_uniform(2.0).mgf(1.0) ==
        doctest::Approx(0.5 * std::expm1(2.0)));
  auto ex = FitnessDistribution::exponential(1.5);
  CHECK(ex.mgf(1.0) == doctest::Approx(3.0));
  CHECK(ex.mgf(1.5) == kInf);
  CHECK(ex.mgf(2.0) == kInf);
  auto ge = FitnessDistribution::general_exponential(2.0, 1.0);
  CHECK(ge.mgf(0.5) == doctest::Approx(4.0));
  // Half-Gaussian density ~ exp(-s^2): closed-form transform
  // exp(x^2/4) * (1 + erf(x/2)).
  auto se = FitnessDistribution::sub_exponential(1.0, 1.0);
  for (double x : {0.0, 0.5, 1.0, 2.0}) {
    double ref = std::exp(0.25 * x * x) * (1.0 + std::erf(0.5 * x));
    CHECK(se.mgf(x) == doctest::Approx(ref).epsilon(1e-9));
  }
  CHECK(FitnessDistribution::pareto(2.5).mgf(0.1) == kInf);
}

TEST_CASE("fitness transform domains and tails") {
  CHECK(FitnessDistribution::exponential(2.0).mgf_domain_sup() == 2.0);
  CHECK(FitnessDistribution::sub_exponential(1.0, 0.5).mgf_domain_sup() ==
        kInf);
  CHECK(FitnessDistribution::pareto(2.0).mgf_domain_sup() == 0.0);
  CHECK(FitnessDistribution::bounded_uniform(3.0).tail() ==
        FitnessTail::Bounded);
  CHECK(FitnessDistribution::general_exponential(1.0, 2.0).tail() ==
        FitnessTail::ExponentialTail);
  CHECK(FitnessDistribution::sub_exponential(2.0, 1.0).tail() ==
        FitnessTail::SubExponentialTail);
  CHECK(FitnessDistribution::pareto(1.5).tail() == FitnessTail::HeavyTail);
}

TEST_CASE("fitness densities integrate to one with matching means") {
  std::vector<FitnessDistribution> fams = {
      FitnessDistribution::bounded_uniform(2.0),
      FitnessDistribution::exponential(0.8),
      FitnessDistribution::general_exponential(2.5, 1.3),
      FitnessDistribution::sub_exponential(0.9, 0.7),
      FitnessDistribution::pareto(3.0, 1.0)};
  for (const auto& f : fams) {
    double hi = f.bounded() ? f.upper()
                : (f.tail() == FitnessTail::HeavyTail ? 2e4 : 60.0);
    auto mass =
        num::integrate([&](double s) { return f.density(s); }, 0.0, hi, 1e-10);
    CHECK(mass.value == doctest::Approx(1.0).epsilon(1e-7));
    auto m1 = num::integrate([&](double s) { return s * f.density(s); }, 0.0,
                             hi, 1e-10);
    CHECK(m1.value == doctest::Approx(f.mean()).epsilon(1e-6));
  }
}

TEST_CASE("log-density derivatives match finite differences") {
  std::vector<FitnessDistribution> fams = {
      FitnessDistribution::exponential(1.5),
      FitnessDistribution::general_exponential(3.0, 2.0),
      FitnessDistribution::sub_exponential(1.0, 0.5)};
  for (const auto& f : fams) {
    for (double s : {0.5, 1.0, 2.0}) {
      double h = 1e-5;
      double fd = (std::log(f.density(s + h)) - std::log(f.density(s - h))) /
                  (2.0 * h);
      CHECK(f.dlog_density(s) == doctest::Approx(fd).epsilon(1e-5));
      double fd2 = (f.dlog_density(s + h) - f.dlog_density(s - h)) / (2.0 * h);
      CHECK(f.d2log_density(s) ==
            doctest::Approx(fd2).scale(1.0).epsilon(1e-5));
    }
  }
}

TEST_CASE("quantile sampler reproduces the density (chi-square)") {
  std::vector<FitnessDistribution> fams = {
      FitnessDistribution::general_exponential(2.0, 1.5),
      FitnessDistribution::sub_exponential(1.0, 1.0)};
  std::mt19937_64 rng(12345);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (const auto& f : fams) {
    const int n = 200000, nbins = 20;
    // Equiprobable bins from the quantile itself would be circular; use
    // direct density integrals for expected counts instead.
    double hi = f.quantile(0.999);
    std::vector<double> edges(nbins + 1);
    for (int i = 0; i <= nbins; ++i) edges[i] = hi * i / nbins;
    std::vector<double> expected(nbins + 1, 0.0);  // last = overflow
    for (int i = 0; i < nbins; ++i)
      expected[i] = n * num::integrate(
                            [&](double s) { return f.density(s); }, edges[i],
                            edges[i + 1], 1e-10)
                            .value;
    double tail = n;
    for (int i = 0; i < nbins; ++i) tail -= expected[i];
    expected[nbins] = tail;
    std::vector<int> counts(nbins + 1, 0);
    for (int i = 0; i < n; ++i) {
      double x = f.quantile(unif(rng));
      int b = static_cast<int>(x / hi * nbins);
      counts[std::min(b, nbins)]++;
    }
    double chi2 = 0.0;
    for (int i = 0; i <= nbins; ++i) {
      if (expected[i] < 5.0) continue;
      double d = counts[i] - expected[i];
      chi2 += d * d / expected[i];
    }
    // 20 effective dof, 99.9% critical value ~ 46.
    CHECK(chi2 < 46.0);
  }
}

TEST_CASE("process spec plain predicate") {
  ProcessSpec plain;
  CHECK(plain.plain());
  ProcessSpec aged = plain;
  aged.aging = AgingFunction::exponential(1.0);
  CHECK(!aged.plain());
  ProcessSpec fit = plain;
  fit.fitness = FitnessDistribution::exponential(2.0);
  CHECK(!fit.plain());
}
