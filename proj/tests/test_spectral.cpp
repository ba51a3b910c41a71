#include <doctest.h>

#include <cmath>

#include "felab/spectral.hpp"

using namespace felab;

namespace {

QuadratureConfig tight() {
  QuadratureConfig c;
  c.abs_tol = 1e-12;
  c.rel_tol = 1e-11;
  return c;
}

double lens_3d(double r) { return r >= 2 ? 0.0 : kPi / 12 * (4 + r) * (2 - r) * (2 - r); }

double legendre(int k, double t) {
  double p0 = 1.0, p1 = t;
  if (k == 0) return p0;
  for (int n = 1; n < k; ++n) {
    const double p2 = ((2 * n + 1) * t * p1 - n * p0) / (n + 1);
    p0 = p1;
    p1 = p2;
  }
  return p1;
}

}  // namespace

TEST_CASE("circle coefficients of the lens kernel") {
  const auto cfg = tight();
  for (int n = 1; n <= 12; ++n) {
    const double exact = n % 2 ? 2.0 / (kPi * n * n) : 2.0 / (kPi * (n * n - 1.0));
    CHECK(circle_coeff(4.0, n, cfg).value == doctest::Approx(exact).epsilon(1e-9));
  }
}

TEST_CASE("three routes to the mode multiplier agree") {
  const auto cfg = tight();
  for (int k : {0, 3, 5}) {
    const double c = 2 * kPi * circle_coeff(4.0, k, cfg).value;
    CHECK(funk_hecke_eigenvalue(2, 4.0, k, cfg).value == doctest::Approx(c).epsilon(1e-8));
    CHECK(hankel_eigenvalue(2, 4.0, k, cfg).value == doctest::Approx(c).epsilon(1e-6));
  }
}

TEST_CASE("d = 3 multipliers against the lens-volume oracle") {
  const auto cfg = tight();
  const auto prof = angle_profile(3, 4.0, cfg);
  for (int k = 0; k <= 3; ++k) {
    const double oracle =
        2 * kPi *
        integrate_adaptive([&](double t) { return lens_3d(2 * std::sin(t / 2)) * legendre(k, std::cos(t)) * std::sin(t); },
                           0.0, kPi, cfg)
            .value;
    CHECK(prof->eigenvalue(k).value == doctest::Approx(oracle).epsilon(1e-8).scale(1e-8));
  }
}

TEST_CASE("mode weights") {
  CHECK(mode_weight(4.0, 2) == doctest::Approx(6.0));
  CHECK(mode_weight(4.0, 3) == doctest::Approx(2.0));
  CHECK(mode_weight(6.0, 1) == doctest::Approx(3.0));
}

TEST_CASE("the disc is stable at q = 4 with neutral translations and shears") {
  const auto s = mode_margins(2, 4.0, 12, {});
  CHECK(s.gamma == doctest::Approx(4.0).epsilon(1e-8));
  REQUIRE(s.neutral_modes.size() == 2);
  CHECK(s.neutral_modes[0] == 1);
  CHECK(s.neutral_modes[1] == 2);
  CHECK(s.worst_mode == 4);
  CHECK(s.stability_constant == doctest::Approx(8.0 / (5.0 * kPi)).epsilon(1e-7));
  for (const auto& m : s.modes)
    if (m.n >= 3) CHECK(m.margin > 0.0);
}

TEST_CASE("d = 1 margins have no higher modes") {
  const auto s = mode_margins(1, 4.0, 0, {});
  CHECK(std::isnan(s.stability_constant));
}

TEST_CASE("sphere-reduced prediction") {
  // A translation of the interval is neutral to second order.
  const double t = 0.01;
  const auto tr = SphereProfile::one_dimensional(0.0, t, t, 0.0);
  CHECK(std::abs(sphere_reduced_prediction(tr, 1, 4.0, {})) < 1e-10);
  // A pure mode-4 bump strictly lowers the functional in d = 2.
  const double e = 0.01;
  const auto bump = SphereProfile::from_functions([&](double th) { return std::max(0.0, -e * std::cos(4 * th)); },
                                                  [&](double th) { return std::max(0.0, e * std::cos(4 * th)); }, 256, 16);
  CHECK(sphere_reduced_prediction(bump, 2, 4.0, {}) < 0.0);
}

TEST_CASE("the stability constant varies smoothly across exponents near 4") {
  std::vector<double> c;
  for (double q : {3.8, 3.9, 4.0, 4.1, 4.2}) {
    const auto s = mode_margins(2, q, 8, {});
    CHECK(s.worst_mode == 4);
    c.push_back(s.stability_constant);
  }
  CHECK(c[2] == doctest::Approx(8.0 / (5.0 * kPi)).epsilon(1e-7));
  // Steps keep one sign and change slowly: a smooth curve through the q = 4 value.
  for (std::size_t i = 0; i + 1 < c.size(); ++i) CHECK((c[i + 1] - c[i]) * (c[1] - c[0]) > 0.0);
  for (std::size_t i = 0; i + 2 < c.size(); ++i) {
    const double d1 = c[i + 1] - c[i], d2 = c[i + 2] - c[i + 1];
    CHECK(std::abs(d2 - d1) < 0.25 * std::abs(d1));
  }
}
