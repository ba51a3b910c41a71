#include <doctest.h>

#include <cmath>

#include "felab/quadrature.hpp"

using namespace felab;

TEST_CASE("bessel_j matches tabulated and elementary values") {
  CHECK(bessel_j(0, 1.0) == doctest::Approx(0.7651976865579666).epsilon(1e-14));
  CHECK(bessel_j(1, 1.0) == doctest::Approx(0.4400505857449335).epsilon(1e-14));
  for (double x : {0.3, 1.7, 12.5, 80.0}) {
    CHECK(bessel_j(0.5, x) == doctest::Approx(std::sqrt(2.0 / (kPi * x)) * std::sin(x)).epsilon(1e-12));
    CHECK(bessel_j(-0.5, x) == doctest::Approx(std::sqrt(2.0 / (kPi * x)) * std::cos(x)).epsilon(1e-12));
  }
  // J_nu(x)/x^nu -> 1 / (2^nu Gamma(nu + 1)) at the origin.
  CHECK(bessel_j_scaled(1.0, 0.0) == doctest::Approx(0.5));
  CHECK(bessel_j_scaled(1.5, 1e-9) == doctest::Approx(1.0 / (std::pow(2.0, 1.5) * std::tgamma(2.5))));
}

TEST_CASE("ball volumes and sphere areas") {
  CHECK(ball_volume(1) == doctest::Approx(2.0));
  CHECK(ball_volume(2) == doctest::Approx(kPi));
  CHECK(ball_volume(3) == doctest::Approx(4.0 * kPi / 3.0));
  CHECK(sphere_area(1) == doctest::Approx(2.0));
  CHECK(sphere_area(2) == doctest::Approx(2.0 * kPi));
  CHECK(sphere_area(3) == doctest::Approx(4.0 * kPi));
  for (int d = 1; d <= 3; ++d) CHECK(sphere_area(d) == doctest::Approx(d * ball_volume(d)));
}

TEST_CASE("adaptive integration on smooth and kinked integrands") {
  QuadratureConfig cfg;
  cfg.abs_tol = 1e-13;
  cfg.rel_tol = 1e-12;
  auto r = integrate_adaptive([](double x) { return std::sin(x); }, 0.0, kPi, cfg);
  CHECK(r.converged);
  CHECK(r.value == doctest::Approx(2.0).epsilon(1e-12));
  auto k = integrate_adaptive([](double x) { return std::sqrt(std::abs(x - 0.3)); }, {0.0, 0.3, 1.0}, cfg);
  const double exact = (2.0 / 3.0) * (std::pow(0.3, 1.5) + std::pow(0.7, 1.5));
  CHECK(k.value == doctest::Approx(exact).epsilon(1e-10));
  CHECK(std::abs(k.value - exact) <= k.error_estimate + 1e-12);
}

TEST_CASE("oscillatory tails") {
  QuadratureConfig cfg;
  cfg.abs_tol = 1e-12;
  cfg.rel_tol = 1e-11;
  auto r = integrate_oscillatory_tail([](double x) { return x == 0.0 ? 1.0 : std::sin(x) / x; },
                                      [](long k) { return kPi * static_cast<double>(k); }, cfg);
  CHECK(r.value == doctest::Approx(kPi / 2.0).epsilon(1e-9));
  // int_0^inf J_0 = 1
  auto j = integrate_oscillatory_tail([](double x) { return bessel_j(0, x); },
                                      [](long k) { return k == 0 ? 0.0 : kPi * (static_cast<double>(k) - 0.25); },
                                      cfg);
  CHECK(j.value == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("Gauss-Legendre integrates polynomials of degree 2n-1 exactly") {
  std::vector<double> x, w;
  gauss_legendre(6, x, w);
  REQUIRE(x.size() == 6);
  for (int p = 0; p <= 11; ++p) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += w[i] * std::pow(x[i], p);
    const double exact = p % 2 ? 0.0 : 2.0 / (p + 1);
    CHECK(s == doctest::Approx(exact).epsilon(1e-14));
  }
}

TEST_CASE("Gegenbauer polynomials reduce to Legendre at lambda 1/2") {
  for (double t : {-0.9, -0.2, 0.4, 1.0}) {
    CHECK(gegenbauer(0, 0.5, t) == doctest::Approx(1.0));
    CHECK(gegenbauer(2, 0.5, t) == doctest::Approx(0.5 * (3 * t * t - 1)));
    CHECK(gegenbauer(3, 0.5, t) == doctest::Approx(0.5 * (5 * t * t * t - 3 * t)));
    // Chebyshev U at lambda 1
    CHECK(gegenbauer(2, 1.0, t) == doctest::Approx(4 * t * t - 1));
  }
}

TEST_CASE("generalized exponential integral") {
  CHECK(expint_p(3.0, 0.0).real() == doctest::Approx(0.5));
  // E_1(1) = 0.21938393439552...
  CHECK(expint_p(1.0, 1.0).real() == doctest::Approx(0.21938393439552029).epsilon(1e-12));
  // Purely imaginary argument against direct quadrature of the definition.
  const double p = 2.5, y = 3.0;
  QuadratureConfig cfg;
  cfg.abs_tol = 1e-13;
  cfg.rel_tol = 1e-12;
  auto re = integrate_oscillatory_tail([&](double t) { return std::cos(y * t) * std::pow(t, -p); },
                                       [&](long k) { return k == 0 ? 1.0 : (0.5 * kPi + kPi * static_cast<double>(k)) / y; },
                                       cfg);
  CHECK(expint_p(p, {0.0, y}).real() == doctest::Approx(re.value).epsilon(1e-7));
}

TEST_CASE("vector panels agree with scalar integration") {
  auto f = [](double x) { return std::array<double, 3>{std::exp(x), std::cos(3 * x), x * x}; };
  std::array<double, 3> v{}, e{};
  const bool ok = integrate_panels_vec<3>(f, {0.0, 0.5, 2.0}, {1e-13, 1e-13, 1e-13}, 1e-13, 500, v, e);
  CHECK(ok);
  CHECK(v[0] == doctest::Approx(std::exp(2.0) - 1.0).epsilon(1e-13));
  CHECK(v[1] == doctest::Approx(std::sin(6.0) / 3.0).epsilon(1e-12));
  CHECK(v[2] == doctest::Approx(8.0 / 3.0).epsilon(1e-13));
}

TEST_CASE("configuration validation") {
  QuadratureConfig cfg;
  cfg.abs_tol = -1.0;
  CHECK_THROWS(cfg.validate());
}
