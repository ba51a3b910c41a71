#include <doctest.h>

#include <cmath>

#include "felab/errors.hpp"
#include "felab/perturbation.hpp"
#include "felab/piecewise_poly.hpp"
#include "felab/spectral.hpp"

using namespace felab;

namespace {

QuadratureConfig tight() {
  QuadratureConfig c;
  c.abs_tol = 1e-13;
  c.rel_tol = 1e-12;
  return c;
}

double tent(double x) { return std::max(0.0, 2.0 - std::abs(x)); }

// int_I int_J tent(x - y) dy dx, split at the kinks of the tent.
double pair_integral(std::pair<double, double> I, std::pair<double, double> J) {
  const auto cfg = tight();
  return integrate_adaptive(
             [&](double x) {
               std::vector<double> br{J.first};
               for (double k : {x - 2.0, x, x + 2.0})
                 if (k > J.first && k < J.second) br.push_back(k);
               br.push_back(J.second);
               std::sort(br.begin(), br.end());
               return integrate_adaptive([&](double y) { return tent(x - y); }, br, cfg).value;
             },
             I.first, I.second, cfg)
      .value;
}

struct Piece {
  double sign;
  std::pair<double, double> iv;
};

// f = 1_E - 1_B as signed pieces, for E an interval overlapping B = [-1, 1].
std::vector<Piece> pieces(double l, double r) {
  std::vector<Piece> p;
  if (l < -1) p.push_back({1.0, {l, -1.0}});
  if (l > -1) p.push_back({-1.0, {-1.0, l}});
  if (r > 1) p.push_back({1.0, {1.0, r}});
  if (r < 1) p.push_back({-1.0, {r, 1.0}});
  return p;
}

}  // namespace

TEST_CASE("quadratic terms of a shifted interval against a real-space double integral") {
  for (double t : {0.05, 0.2}) {
    const auto f = pieces(-1 + t, 1 + t);
    double LL = 0.0, Lrefl = 0.0;
    for (const auto& a : f)
      for (const auto& b : f) {
        LL += a.sign * b.sign * pair_integral(a.iv, b.iv);
        Lrefl += a.sign * b.sign * pair_integral(a.iv, {-b.iv.second, -b.iv.first});
      }
    const auto qt = quadratic_terms(IntervalSet({{-1 + t, 1 + t}}), 4.0, tight());
    CHECK(qt.LL == doctest::Approx(LL).epsilon(1e-7));
    CHECK(qt.Lrefl == doctest::Approx(Lrefl).epsilon(1e-7));
  }
}

TEST_CASE("inner_K in d = 1 against the exact convolution power") {
  const auto K = PiecewisePoly::convolution_power(IntervalSet({{-1.0, 1.0}}), 3).antiderivative();
  for (double e : {0.01, 0.05}) {
    const SetModel E = IntervalSet({{-1.0, 1.0 - e}, {1.0, 1.0 + e}});
    const double oracle = (K(1 + e) - K(1.0)) - (K(1.0) - K(1 - e));
    CHECK(inner_K(E, 4.0, tight()).value == doctest::Approx(oracle).epsilon(1e-9));
    const auto rep = expansion_report(E, 4.0, tight());
    CHECK(rep.term_K == doctest::Approx(4.0 * oracle).epsilon(1e-8));
    // Moving mass across the boundary costs first order.
    CHECK(rep.term_K < 0.0);
  }
}

TEST_CASE("translations are exactly neutral") {
  for (int d : {1, 2}) {
    const auto fam = named_family("translate", d);
    const auto rep = expansion_report(fam(0.05), 4.0);
    CHECK(std::abs(rep.direct - rep.base) < 1e-9);
    CHECK(std::abs(rep.term_sum() + rep.residual) < 1e-9);
    CHECK(rep.symdiff > 0.0);
  }
}

TEST_CASE("the expansion is exact at the ball") {
  const auto rep = expansion_report(unit_ball(1), 4.0);
  CHECK(rep.direct == doctest::Approx(rep.base));
  CHECK(std::abs(rep.term_K) < 1e-12);
  CHECK(std::abs(rep.residual) < 1e-12);
}

TEST_CASE("remainder tags and refusals") {
  CHECK(expansion_report(named_family("sliver", 1)(0.02), 4.0).remainder == RemainderOrder::two_plus_rho);
  CHECK(expansion_report(named_family("sliver", 1)(0.02), 3.0).remainder == RemainderOrder::two);
  const auto low = expansion_report(named_family("sliver", 1)(0.02), 2.5);
  CHECK(low.remainder == RemainderOrder::q_minus_one);
  CHECK(low.term_LL == 0.0);
  CHECK_THROWS_AS(quadratic_terms(named_family("sliver", 1)(0.02), 2.5), ThresholdError);
  CHECK_THROWS_AS(expansion_report(IntervalSet({{3.0, 5.0}}), 4.0), DomainError);
  CHECK_THROWS_AS(expansion_report(named_family("mode:3", 2)(0.02), 2.8), ThresholdError);
  CHECK_THROWS(named_family("nonsense", 1));
  CHECK(to_string(RemainderOrder::two) == "O(eps^2)");
}

TEST_CASE("family members have the ball's measure") {
  for (double e : {0.01, 0.05}) {
    CHECK(measure(named_family("sliver", 1)(e)) == doctest::Approx(2.0));
    CHECK(measure(named_family("mode:4", 2)(e)) == doctest::Approx(kPi).epsilon(1e-12));
    CHECK(measure(named_family("corona:2", 2)(e)) == doctest::Approx(kPi).epsilon(1e-10));
  }
}

TEST_CASE("remainder slope in d = 1") {
  const std::vector<double> eps{0.08, 0.04, 0.02, 0.01};
  const auto s4 = remainder_slope(named_family("sliver", 1), 4.0, eps);
  CHECK_FALSE(s4.noise_limited);
  CHECK(s4.slope > 2.1);
  const auto s3 = remainder_slope(named_family("sliver", 1), 3.0, eps);
  CHECK(s3.slope > 1.9);
  CHECK(s3.reports.size() == eps.size());
  const SetFamily still = [](double) { return unit_ball(1); };
  CHECK(remainder_slope(still, 4.0, eps).noise_limited);
  CHECK_THROWS_AS(remainder_slope(named_family("sliver", 1), 4.0, {0.02, 0.01}), DomainError);
}

TEST_CASE("single-mode quadratic term in d = 2 follows the circle coefficient") {
  const int k = 4;
  const double e = 0.02;
  const SetModel E = named_family("mode:4", 2)(e);
  const auto F = boundary_profile(E, 8);
  const double pred = 4 * kPi * kPi * circle_coeff(4.0, k, {}).value * std::norm(F.F_hat[k]) * 2;
  const auto qt = quadratic_terms(E, 4.0);
  CHECK(qt.LL == doctest::Approx(pred).epsilon(0.05));
}
