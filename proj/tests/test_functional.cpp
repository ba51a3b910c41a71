#include <doctest.h>

#include <cmath>

#include "felab/functional.hpp"
#include "felab/piecewise_poly.hpp"
#include "felab/random.hpp"

using namespace felab;

namespace {

double lens_2d(double t) { return t >= 2 ? 0.0 : 2 * std::acos(t / 2) - 0.5 * t * std::sqrt(4 - t * t); }

IntervalSet random_union(std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::pair<double, double>> iv;
  const int k = 1 + static_cast<int>(rng.next() % 3);
  for (int i = 0; i < k; ++i) {
    const double c = rng.uniform(-3.0, 3.0), w = rng.uniform(0.1, 1.0);
    iv.emplace_back(c, c + w);
  }
  return IntervalSet(iv);
}

}  // namespace

TEST_CASE("indicator transform") {
  const SetModel I = IntervalSet({{0.0, 1.0}});
  CHECK(indicator_hat(I, 0.0).real() == doctest::Approx(1.0));
  const double xi = 0.37;
  const auto h = indicator_hat(I, xi);
  // int_0^1 e^{-2 pi i x xi} dx
  const std::complex<double> exact = (1.0 - std::polar(1.0, -2 * kPi * xi)) / std::complex<double>(0.0, 2 * kPi * xi);
  CHECK(std::abs(h - exact) < 1e-14);
  CHECK(indicator_hat(unit_ball(2), std::array<double, 2>{0.0, 0.0}).real() == doctest::Approx(kPi));
}

TEST_CASE("Babenko constant") {
  CHECK(babenko_constant(4.0, 1) == doctest::Approx(std::pow(4.0 / 3.0, 3.0 / 8.0) * std::pow(4.0, -1.0 / 8.0)));
  CHECK(babenko_constant(4.0, 2) == doctest::Approx(std::pow(babenko_constant(4.0, 1), 2)));
  CHECK(babenko_constant(2.0, 1) == doctest::Approx(1.0));
}

TEST_CASE("Phi of an interval in closed form") {
  const auto r = phi_q(IntervalSet({{0.0, 1.0}}), 4.0);
  CHECK(r.phi == doctest::Approx(std::pow(2.0 / 3.0, 0.25)).epsilon(1e-10));
  CHECK(r.measure == doctest::Approx(1.0));
}

TEST_CASE("Phi of the disc against the lens-area oracle") {
  QuadratureConfig c;
  c.abs_tol = 1e-13;
  c.rel_tol = 1e-12;
  const double norm4 = integrate_adaptive([](double r) { return lens_2d(r) * lens_2d(r) * 2 * kPi * r; }, 0.0, 2.0, c).value;
  const auto r = phi_q(unit_ball(2), 4.0);
  CHECK(r.norm_q_pow_q == doctest::Approx(norm4).epsilon(1e-7));
  CHECK(r.phi == doctest::Approx(std::pow(kPi, -0.75) * std::pow(norm4, 0.25)).epsilon(1e-7));
}

TEST_CASE("Phi is affine invariant") {
  const SetModel E = IntervalSet({{0.0, 1.0}, {1.5, 2.1}});
  const double p0 = phi_q(E, 5.0).phi;
  for (double s : {-2.0, 0.3, 3.0}) {
    AffineMap T = AffineMap::identity(1);
    T.A[0] = s;
    T.v[0] = 0.7;
    CHECK(phi_q(apply_affine(E, T), 5.0).phi == doctest::Approx(p0).epsilon(1e-8));
  }
  const SetModel S = StarSet({0.0, 0.0}, 1.0, {0.0, 0.1}, {0.05, 0.0});
  const double s0 = phi_q(S, 4.0).phi;
  const auto T = AffineMap::linear(1.3, 0.2, 0.0, 1.0 / 1.3).then(AffineMap::translation(2, 0.3, 0.1));
  CHECK(phi_q(apply_affine(S, T), 4.0).phi == doctest::Approx(s0).epsilon(1e-6));
}

TEST_CASE("even-q convolution oracle agrees with the frequency computation") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const SetModel E = random_union(seed);
    for (int q : {4, 6}) {
      const double a = phi_q(E, q).phi, b = phi_even_oracle(E, q).phi;
      CHECK(a == doctest::Approx(b).epsilon(1e-7));
    }
  }
}

TEST_CASE("grid FFT approximation") {
  const auto g = phi_grid_fft(unit_ball(2), 4.0, 512);
  CHECK(g.phi == doctest::Approx(phi_q(unit_ball(2), 4.0).phi).epsilon(5e-3));
}

TEST_CASE("the ball beats random unions and respects the Babenko bound") {
  reset_babenko_stats();
  for (double q : {3.0, 4.0, 5.5}) {
    const double ball = phi_q(unit_ball(1), q).phi;
    CHECK(ball < babenko_constant(q, 1));
    for (std::uint64_t seed = 20; seed < 26; ++seed) CHECK(phi_q(random_union(seed), q).phi <= ball + 1e-9);
  }
  const auto st = babenko_stats();
  CHECK(st.evaluations >= 21);
  CHECK(st.violations == 0);
  CHECK(st.worst_ratio < 1.0);
}

TEST_CASE("continuity probe in q is finite and small for nearby exponents") {
  const double v = q_continuity_probe(unit_ball(1), 4.0, 4.01);
  CHECK(std::isfinite(v));
  CHECK(v >= 0.0);
  CHECK(v < 1.0);
}

TEST_CASE("frequency integration of |1_B^|^2 is Plancherel") {
  FrequencyOptions opt;
  opt.abs_tol.fill(1e-12);
  opt.tail_exponent.fill(2.0);
  const auto r = integrate_frequency(
      unit_ball(1), [](double, std::complex<double> h) { return FreqVec{std::norm(h), 0, 0, 0, 0, 0}; }, opt);
  CHECK(r.value[0] == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(set_diameter(unit_ball(1)) == doctest::Approx(2.0));
}
