#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "numerics.hpp"

using namespace ctbp::num;

TEST_CASE("log_gamma matches known values") {
  CHECK(log_gamma(5.0) == doctest::Approx(3.1780538303479456).epsilon(1e-15));
  CHECK(log_gamma(1.0) == doctest::Approx(0.0).scale(1).epsilon(1e-15));
  CHECK(log_gamma(0.5) ==
        doctest::Approx(0.5 * std::log(M_PI)).epsilon(1e-15));
  CHECK_THROWS_AS(log_gamma(0.0), std::domain_error);
  CHECK_THROWS_AS(log_gamma(-2.5), std::domain_error);
}

TEST_CASE("adaptive quadrature on smooth finite integrals") {
  auto r = integrate([](double x) { return std::exp(-x); }, 0.0, 1.0, 1e-12);
  CHECK(r.value == doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-13));
  CHECK(r.abs_error <= 1e-12);
  CHECK(r.evaluations >= 15);

  // 1/x over [1,3]: exercises subdivision near the left end.
  auto r2 = integrate([](double x) { return 1.0 / x; }, 1.0, 3.0, 1e-13);
  CHECK(r2.value == doctest::Approx(1.0986122886681097).epsilon(1e-13));
}

TEST_CASE("quadrature handles sharp peaks via subdivision") {
  // Narrow Gaussian bump: total mass ~ sqrt(pi) * 0.01.
  auto f = [](double x) {
    double z = (x - 0.7) / 0.01;
    return std::exp(-z * z);
  };
  auto r = integrate(f, 0.0, 10.0, 1e-12);
  CHECK(r.value == doctest::Approx(std::sqrt(M_PI) * 0.01).epsilon(1e-10));
}

TEST_CASE("semi-infinite quadrature with decay hint") {
  // Mean-offspring style integrand; reference value from a high-precision
  // computation, frozen: 0.26424111765711536.
  auto f = [](double t) {
    return 2.0 * std::exp(-2.0 * t) * (1.0 - std::exp(-(1.0 - std::exp(-t))));
  };
  auto r = integrate_semi_inf(f, 0.0, 1e-10, 2.0);
  CHECK(r.value == doctest::Approx(0.26424111765711536).epsilon(1e-10));
  CHECK(r.abs_error <= 1e-10);

  auto g = [](double t) { return std::exp(-0.5 * t); };
  auto r2 = integrate_semi_inf(g, 0.0, 1e-10, 0.5);
  CHECK(r2.value == doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("root finding on bracketed sign changes") {
  auto f = [](double x) { return x * x - 2.0; };
  double root = find_root(f, {0.0, 2.0}, 1e-14);
  CHECK(root == doctest::Approx(std::sqrt(2.0)).epsilon(1e-13));

  auto g = [](double x) { return std::cos(x) - x; };
  CHECK(find_root(g, {0.0, 1.0}) == doctest::Approx(0.7390851332151607));

  CHECK_THROWS_AS(find_root(f, {2.0, 3.0}), NumericsError);
}

TEST_CASE("quadrature failure carries a best estimate") {
  // Highly oscillatory integrand with an impossible tolerance and a tiny
  // budget must refuse rather than return silently.
  auto f = [](double x) { return std::sin(1.0 / (x + 1e-4)); };
  CHECK_THROWS_AS(integrate(f, 0.0, 1.0, 1e-16, 600), NumericsError);
}

TEST_CASE("normal CDF and bivariate orthant probability") {
  CHECK(normal_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(normal_cdf(1.959963984540054) == doctest::Approx(0.975).epsilon(1e-12));

  // Independent case factorises.
  double p = bivariate_normal_cdf(0.3, -0.2, 1.0, 0.0, 1.0, 1e-10);
  CHECK(p == doctest::Approx(normal_cdf(0.3) * normal_cdf(-0.2)).epsilon(1e-8));

  // Correlated case; reference frozen from a high-precision computation.
  double q = bivariate_normal_cdf(0.5, 0.3, 2.0, 0.6, 1.0, 1e-10);
  CHECK(q == doctest::Approx(0.4580817431005411).epsilon(1e-7));
}
