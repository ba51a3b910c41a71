#include <doctest.h>

#include <cmath>

#include "felab/errors.hpp"
#include "felab/io.hpp"
#include "felab/random.hpp"
#include "felab/set_model.hpp"

using namespace felab;

namespace {

double lens_2d(double t) { return t >= 2 ? 0.0 : 2 * std::acos(t / 2) - 0.5 * t * std::sqrt(4 - t * t); }

StarSet wobbly(double eps, int k) {
  std::vector<double> a(k, 0.0), b(k, 0.0);
  a[k - 1] = eps;
  return StarSet({0.0, 0.0}, 1.0, a, b);
}

}  // namespace

TEST_CASE("interval sets merge and measure") {
  const IntervalSet E({{2.0, 3.0}, {0.0, 1.0}, {0.5, 1.5}, {3.0, 3.5}});
  REQUIRE(E.intervals().size() == 2);
  CHECK(E.measure() == doctest::Approx(3.0));
  CHECK(E.coverage(1.0, 2.5) == doctest::Approx(1.0));
  CHECK_THROWS_AS(IntervalSet({{1.0, 1.0}}), InvalidSetError);
}

TEST_CASE("star set geometry") {
  CHECK(StarSet::disc(2.0).measure() == doctest::Approx(4 * kPi));
  const auto s = wobbly(0.2, 3);
  // |E| = pi (c0^2 + sum (a_n^2 + b_n^2) / 2)
  CHECK(s.measure() == doctest::Approx(kPi * (1 + 0.02)).epsilon(1e-12));
  CHECK(s.min_radius() == doctest::Approx(0.8).epsilon(1e-6));
  CHECK(s.contains({0.0, 0.0}));
  CHECK_FALSE(s.contains({1.3, 0.0}));
  const auto e = StarSet::ellipse(AffineMap::linear(2.0, 0.0, 0.0, 0.5));
  CHECK(e.is_ellipse());
  CHECK(e.measure() == doctest::Approx(kPi));
}

TEST_CASE("affine maps compose and invert") {
  const auto T = AffineMap::linear(1.5, 0.2, -0.3, 0.9).then(AffineMap::translation(2, 0.4, -1.0));
  const auto I = T.then(T.inverse());
  CHECK(I.distance_from_identity() < 1e-12);
  const auto x = T.apply({0.3, 0.7});
  CHECK(x[0] == doctest::Approx(1.5 * 0.3 + 0.2 * 0.7 + 0.4));
  CHECK(x[1] == doctest::Approx(-0.3 * 0.3 + 0.9 * 0.7 - 1.0));
  CHECK(AffineMap::linear(2.0, 0.0, 0.0, 0.5).measure_preserving());
  CHECK_FALSE(AffineMap::linear(2.0, 0.0, 0.0, 1.0).measure_preserving());
}

TEST_CASE("measure normalization") {
  const auto E = normalize_measure(IntervalSet({{0.0, 1.0}, {3.0, 4.0}}), 2.0);
  CHECK(measure(E) == doctest::Approx(2.0));
  CHECK(measure(normalize_measure(wobbly(0.3, 4), kPi)) == doctest::Approx(kPi));
  CHECK(measure(unit_ball(1)) == doctest::Approx(2.0));
  CHECK(dimension(unit_ball(2)) == 2);
}

TEST_CASE("symmetric difference of translated discs") {
  for (double t : {0.05, 0.3, 1.0}) {
    const auto moved = apply_affine(unit_ball(2), AffineMap::translation(2, t));
    const double exact = 2 * (kPi - lens_2d(t));
    CHECK(symdiff_measure(unit_ball(2), moved) == doctest::Approx(exact).epsilon(1e-4));
  }
  const auto J = IntervalSet({{-0.5, 1.5}});
  CHECK(symdiff_measure(unit_ball(1), J) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("distance to ellipsoids") {
  CHECK(dist_to_ellipsoids(unit_ball(1)).distance < 1e-9);
  // Best equal-measure interval covers one of the two unit pieces.
  CHECK(dist_to_ellipsoids(IntervalSet({{0.0, 1.0}, {5.0, 6.0}})).distance == doctest::Approx(1.0).epsilon(1e-6));
  const SetModel ell = StarSet::ellipse(AffineMap::linear(1.7, 0.4, 0.0, 1.0 / 1.7));
  CHECK(dist_to_ellipsoids(ell).distance < 1e-4);
  CHECK(dist_to_ellipsoids(SetModel(wobbly(0.1, 3))).distance > 0.01);
}

TEST_CASE("distance is invariant under measure-preserving affine maps") {
  Rng rng(7);
  const SetModel E = wobbly(0.15, 3);
  const double d0 = dist_to_ellipsoids(E).distance;
  for (int i = 0; i < 3; ++i) {
    const double s = std::exp(rng.uniform(-0.3, 0.3)), sh = rng.uniform(-0.3, 0.3);
    const auto T = AffineMap::linear(s, sh, 0.0, 1.0 / s).then(AffineMap::translation(2, rng.uniform(), rng.uniform()));
    CHECK(dist_to_ellipsoids(apply_affine(E, T)).distance == doctest::Approx(d0).epsilon(1e-3));
  }
}

TEST_CASE("balance kills the low moments of a perturbed disc") {
  Rng rng(3);
  std::vector<double> a(6), b(6);
  for (int n = 0; n < 6; ++n) {
    a[n] = rng.uniform(-0.02, 0.02);
    b[n] = rng.uniform(-0.02, 0.02);
  }
  const SetModel E = normalize_measure(StarSet({0.1, -0.05}, 1.0, a, b), kPi);
  const auto r = balance(E);
  CHECK(r.residual < 1e-9);
  for (double m : balance_moments(r.balanced)) CHECK(std::abs(m) < 1e-9);
  CHECK(measure(r.balanced) == doctest::Approx(kPi).epsilon(1e-10));
  const auto F = boundary_profile(r.balanced, 16);
  for (int k = 0; k <= 2; ++k) CHECK(vanishing_check(F, k) < 1e-8);
}

TEST_CASE("balanced d = 1 sets have F(+1) = F(-1)") {
  const SetModel E = IntervalSet({{-0.9, 1.2}});
  const auto r = balance(E);
  REQUIRE(balance_moments(r.balanced).size() == 1);
  CHECK(std::abs(balance_moments(r.balanced)[0]) < 1e-12);
}

TEST_CASE("boundary profile of a single mode") {
  const double eps = 0.01;
  const auto F = boundary_profile(SetModel(wobbly(eps, 4)), 8);
  CHECK(F.modes() == 8);
  // F = (1 - r^2) / 2 = -eps cos 4t + O(eps^2)
  CHECK(F.F_hat[4].real() == doctest::Approx(-eps / 2).epsilon(1e-3));
  CHECK(std::abs(F.F_hat[3]) < 1e-12);
}

TEST_CASE("json round trip") {
  const SetModel s = StarSet({0.1, 0.2}, 1.1, {0.01, 0.0, 0.03}, {0.0, -0.02, 0.0}, AffineMap::linear(1.2, 0.1, 0.0, 0.9));
  const auto back = set_from_json(set_to_json(s));
  CHECK(set_to_json(back) == set_to_json(s));
  const SetModel iv = IntervalSet({{-1.0, 0.25}, {0.5, 2.0}});
  CHECK(set_to_json(set_from_json(set_to_json(iv))) == set_to_json(iv));
  CHECK_THROWS_AS(set_from_json(json{{"kind", "blob"}}), InvalidSetError);
  CHECK(fmt17(0.1) == "0.10000000000000001");
}
