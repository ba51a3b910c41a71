#include <doctest.h>

#include <cmath>
#include <sstream>

#include "felab/errors.hpp"
#include "felab/piecewise_poly.hpp"
#include "felab/radial_kernels.hpp"

using namespace felab;

namespace {

QuadratureConfig tight() {
  QuadratureConfig c;
  c.abs_tol = 1e-12;
  c.rel_tol = 1e-11;
  return c;
}

// |B cap (B + x)| for unit balls at distance r.
double lens_2d(double r) { return r >= 2 ? 0.0 : 2 * std::acos(r / 2) - 0.5 * r * std::sqrt(4 - r * r); }
double lens_3d(double r) { return r >= 2 ? 0.0 : kPi / 12 * (4 + r) * (2 - r) * (2 - r); }

}  // namespace

TEST_CASE("thresholds") {
  CHECK(continuity_threshold(1) == doctest::Approx(3.0));
  CHECK(continuity_threshold(2) == doctest::Approx(10.0 / 3.0));
  CHECK(continuity_threshold(3) == doctest::Approx(3.5));
  CHECK(k_threshold(1) == doctest::Approx(2.0));
  CHECK(k_threshold(2) == doctest::Approx(7.0 / 3.0));
  try {
    require_above_threshold(KernelKind::L, 2, 3.0);
    FAIL("expected a threshold error");
  } catch (const ThresholdError& e) {
    CHECK(e.threshold() == doctest::Approx(10.0 / 3.0));
  }
  CHECK_NOTHROW(require_above_threshold(KernelKind::K, 2, 3.0));
  CHECK_THROWS_AS(kernel_value(KernelKind::L, 1, 3.0, 0.5, {}), ThresholdError);
}

TEST_CASE("ball transform") {
  for (double r : {0.1, 0.7, 2.3}) {
    CHECK(ball_hat(1, r) == doctest::Approx(std::sin(2 * kPi * r) / (kPi * r)).epsilon(1e-13));
    const double x = 2 * kPi * r;
    CHECK(ball_hat(3, r) == doctest::Approx(4 * kPi * (std::sin(x) - x * std::cos(x)) / (x * x * x)).epsilon(1e-11));
  }
  for (int d = 1; d <= 3; ++d) CHECK(ball_hat(d, 0.0) == doctest::Approx(ball_volume(d)));
}

TEST_CASE("L_4 is the self-convolution of the ball") {
  const auto cfg = tight();
  for (double r : {0.0, 0.3, 1.0, 1.7, 2.5}) {
    CHECK(kernel_value(KernelKind::L, 1, 4.0, r, cfg).value == doctest::Approx(std::max(0.0, 2 - r)).epsilon(1e-8));
    CHECK(kernel_value(KernelKind::L, 2, 4.0, r, cfg).value == doctest::Approx(lens_2d(r)).epsilon(1e-8));
    CHECK(kernel_value(KernelKind::L, 3, 4.0, r, cfg).value == doctest::Approx(lens_3d(r)).epsilon(1e-8));
  }
}

TEST_CASE("K_q in d = 1 equals the (q-1)-fold convolution power for even q") {
  const auto cfg = tight();
  const IntervalSet B({{-1.0, 1.0}});
  for (int q : {4, 6}) {
    const auto oracle = PiecewisePoly::convolution_power(B, q - 1);
    for (double r : {0.0, 0.5, 1.0, 1.5, 2.75}) {
      CHECK(kernel_value(KernelKind::K, 1, q, r, cfg).value == doctest::Approx(oracle(r)).epsilon(1e-8));
      CHECK(kernel_k_derivative(1, q, r + 0.01, cfg).value ==
            doctest::Approx(oracle.derivative(r + 0.01)).epsilon(1e-7).scale(1.0));
    }
  }
}

TEST_CASE("gamma values") {
  const auto cfg = tight();
  CHECK(gamma_qd(2, 4.0, cfg).value == doctest::Approx(4.0).epsilon(1e-8));
  // d = 1, q = 4: K = 3 - x^2 on [-1, 1].
  const auto oracle = PiecewisePoly::convolution_power(IntervalSet({{-1.0, 1.0}}), 3);
  CHECK(-oracle.derivative(1.0 - 1e-12) == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(gamma_closed_form_1d(4.0, cfg).value == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(gamma_spectral(1, 4.0, cfg).value == doctest::Approx(2.0).epsilon(1e-8));
  // The two d = 1 routes agree for non-integer q as well.
  for (double q : {3.5, 5.3}) {
    const auto a = gamma_closed_form_1d(q, cfg), b = gamma_spectral(1, q, cfg);
    CHECK(std::abs(a.value - b.value) <= 1e-8 * std::abs(a.value));
    CHECK(a.value > 0.0);
  }
}

TEST_CASE("sampled profiles interpolate the pointwise kernel") {
  const auto cfg = tight();
  const auto p = kernel_profile(KernelKind::L, 2, 4.0, 3.0, 301, cfg);
  CHECK(p.r_max() == doctest::Approx(3.0));
  CHECK(p.radii().size() == 301);
  for (double r : {0.123, 0.987, 1.555, 2.2})
    CHECK(p(r) == doctest::Approx(lens_2d(r)).epsilon(1e-5).scale(1.0));
  std::ostringstream os;
  write_profile_csv(os, p);
  CHECK(os.str().find('\n') != std::string::npos);
}

TEST_CASE("first variation holds for the ball at even exponents") {
  const auto inner = cell_centered_grid(0.0, 1.0, 64), outer = cell_centered_grid(1.0, 4.0, 64);
  CHECK(inner.front() == doctest::Approx(1.0 / 128));
  CHECK(outer.back() == doctest::Approx(4.0 - 3.0 / 128));
  for (int d : {1, 2}) {
    const auto r = first_variation_check(d, 4.0, inner, outer, {});
    CHECK(r.satisfied);
    CHECK(r.inner_min >= r.outer_max);
  }
}

TEST_CASE("rho_d is the quadratic coefficient of the ball transform") {
  for (int d = 1; d <= 3; ++d) {
    CHECK(rho_d(d) == doctest::Approx(2 * kPi / (d + 2)));
    const double r = 1e-3;
    const double defect = 1.0 - ball_hat(d, r) / ball_volume(d);
    CHECK(defect == doctest::Approx(kPi * rho_d(d) * r * r).epsilon(1e-4));
  }
}
