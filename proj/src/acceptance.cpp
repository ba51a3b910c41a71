#include "felab/acceptance.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "felab/errors.hpp"
#include "felab/functional.hpp"
#include "felab/perturbation.hpp"
#include "felab/piecewise_poly.hpp"
#include "felab/radial_kernels.hpp"
#include "felab/random.hpp"
#include "felab/search.hpp"
#include "felab/spectral.hpp"

namespace felab {

namespace {

using Clock = std::chrono::steady_clock;

std::string sci(double x) {
  std::ostringstream os;
  os << std::setprecision(3) << std::scientific << x;
  return os.str();
}

std::string fix(double x, int digits = 12) {
  std::ostringstream os;
  os << std::setprecision(digits) << std::fixed << x;
  return os.str();
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

// Seeded union of 1..4 intervals of total measure 2.
IntervalSet random_union(std::uint64_t seed) {
  Rng rng(seed);
  const int k = 1 + static_cast<int>(rng.next() % 4);
  Family f{FamilyKind::interval_unions, k};
  return std::get<IntervalSet>(family_member(f, random_parameters(f, rng.next())));
}

// Rot(a) diag(e^t, e^-t) Rot(b) + v
AffineMap random_sl2(Rng& rng, double max_stretch) {
  const double a = rng.uniform(0.0, 2.0 * kPi), b = rng.uniform(0.0, 2.0 * kPi);
  const double t = rng.uniform(-max_stretch, max_stretch);
  const double ca = std::cos(a), sa = std::sin(a), cb = std::cos(b), sb = std::sin(b);
  const double e = std::exp(t), ei = std::exp(-t);
  // [ca -sa; sa ca] [e 0; 0 ei] [cb -sb; sb cb]
  AffineMap T = AffineMap::linear(ca * e * cb - sa * ei * sb, -ca * e * sb - sa * ei * cb,
                                  sa * e * cb + ca * ei * sb, -sa * e * sb + ca * ei * cb);
  T.v = {rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
  return T;
}

StarSet unit_measure_star(const std::vector<double>& a, const std::vector<double>& b) {
  const StarSet raw({0.0, 0.0}, 1.0, a, b);
  const double s = std::sqrt(kPi / raw.measure());
  std::vector<double> as(a), bs(b);
  for (auto& x : as) x *= s;
  for (auto& x : bs) x *= s;
  return StarSet({0.0, 0.0}, s, as, bs);
}

Outcome c1_gamma_2d() {
  const auto t0 = Clock::now();
  const IntegralResult g = gamma_qd(2, 4.0, QuadratureConfig{});
  const double t = seconds_since(t0);
  const double err = std::abs(g.value - 4.0);
  return {err <= 1e-6 && t < 10.0, "gamma_{4,2} = " + fix(g.value) + " |err| " + sci(err) + " in " + fix(t, 2) + " s"};
}

Outcome c2_circle_coeff() {
  const auto t0 = Clock::now();
  double worst = 0.0;
  for (int n = 1; n <= 20; ++n) {
    const double exact = n % 2 ? 2.0 / (kPi * n * n) : 2.0 / (kPi * (n * n - 1.0));
    worst = std::max(worst, std::abs(circle_coeff(4.0, n, QuadratureConfig{}).value - exact));
  }
  const double t = seconds_since(t0);
  return {worst <= 1e-8 && t < 60.0, "max |L^(n) - closed form|, n <= 20: " + sci(worst) + " in " + fix(t, 2) + " s"};
}

Outcome c3_mode_gap() {
  const ModeSpectrum s = mode_margins(2, 4.0, 40, QuadratureConfig{});
  double neutral = 0.0;
  for (int n : {1, 2}) neutral = std::max(neutral, std::abs(mode_weight(4.0, n) * s.modes[n].ell_hat - 4.0 / kPi));
  double best = -1.0;
  int arg = -1;
  for (int n = 3; n <= 40; ++n) {
    const double v = mode_weight(4.0, n) * s.modes[n].ell_hat;
    if (v > best) {
      best = v;
      arg = n;
    }
  }
  const double gap_err = std::abs(best - 4.0 / (5.0 * kPi));
  return {neutral <= 1e-9 && gap_err <= 1e-8 && arg == 4,
          "neutral |err| " + sci(neutral) + "; max_{3..40} = " + fix(best) + " at n = " + std::to_string(arg) +
              ", |err| " + sci(gap_err)};
}

Outcome c4_gamma_1d() {
  const IntegralResult a = gamma_closed_form_1d(4.0, QuadratureConfig{});
  const IntegralResult b = gamma_spectral(1, 4.0, QuadratureConfig{});
  const double ea = std::abs(a.value - 2.0), eb = std::abs(b.value - 2.0);
  return {ea <= 1e-7 && eb <= 1e-7,
          "closed form " + fix(a.value) + " (|err| " + sci(ea) + "), spectral " + fix(b.value) + " (|err| " + sci(eb) + ")"};
}

Outcome c5_phi_interval() {
  const QuadratureConfig cfg;
  const double phi = phi_q(IntervalSet({{0.0, 1.0}}), 4.0, cfg).phi;
  const double e0 = std::abs(phi - std::pow(2.0 / 3.0, 0.25));
  double worst = 0.0;
  for (std::uint64_t i = 0; i < 100; ++i) {
    const IntervalSet E = random_union(1000 + i);
    const int q = i % 2 ? 6 : 4;
    const double a = phi_q(E, q, cfg).phi, b = phi_even_oracle(E, q).phi;
    worst = std::max(worst, std::abs(a - b) / b);
  }
  return {e0 <= 1e-8 && worst <= 1e-6,
          "Phi_4(interval) |err| " + sci(e0) + "; oracle max rel diff over 100 unions (q = 4, 6) " + sci(worst)};
}

Outcome c6_rho() {
  const double e = std::abs(rho_d(2) - kPi / 2.0);
  double min_slope = 1e300;
  for (int d = 1; d <= 3; ++d) {
    const double rho = rho_d(d), w = ball_volume(d);
    const int n = 9;
    double mx = 0.0, my = 0.0;
    std::vector<double> lx(n), ly(n);
    for (int i = 0; i < n; ++i) {
      const double r = std::pow(10.0, -3.0 + 2.0 * i / (n - 1));
      lx[i] = std::log(r);
      ly[i] = std::log(std::abs(ball_hat(d, r) - w * (1.0 - kPi * rho * r * r)));
      mx += lx[i] / n;
      my += ly[i] / n;
    }
    double sxy = 0.0, sxx = 0.0;
    for (int i = 0; i < n; ++i) {
      sxy += (lx[i] - mx) * (ly[i] - my);
      sxx += (lx[i] - mx) * (lx[i] - mx);
    }
    min_slope = std::min(min_slope, sxy / sxx);
  }
  return {e <= 1e-9 && min_slope >= 3.9,
          "|rho_2 - pi/2| " + sci(e) + "; min small-r slope over d = 1..3: " + fix(min_slope, 4)};
}

Outcome c8_affine() {
  Rng rng(8);
  const QuadratureConfig cfg;
  double w1 = 0.0, wd1 = 0.0;
  const IntervalSet E1({{-1.3, -0.2}, {0.1, 0.6}, {1.0, 1.4}});
  const double phi1 = phi_q(E1, 4.0, cfg).phi, dist1 = dist_to_ellipsoids(E1).distance;
  for (int i = 0; i < 50; ++i) {
    AffineMap T = AffineMap::identity(1);
    T.A[0] = rng.uniform() < 0.5 ? -1.0 : 1.0;
    T.v[0] = rng.uniform(-3.0, 3.0);
    const SetModel F = apply_affine(E1, T);
    w1 = std::max(w1, std::abs(phi_q(F, 4.0, cfg).phi - phi1));
    wd1 = std::max(wd1, std::abs(dist_to_ellipsoids(F).distance - dist1));
  }
  const QuadratureConfig cfg2 = search_quadrature(2);
  const StarSet E2 = unit_measure_star({0.05, 0.08, 0.06}, {-0.04, 0.03, 0.05});
  const double phi2 = phi_q(E2, 4.0, cfg2).phi, dist2 = dist_to_ellipsoids(E2).distance;
  double w2 = 0.0, wd2 = 0.0;
  for (int i = 0; i < 50; ++i) {
    const SetModel F = apply_affine(E2, random_sl2(rng, 0.4));
    w2 = std::max(w2, std::abs(phi_q(F, 4.0, cfg2).phi - phi2));
    wd2 = std::max(wd2, std::abs(dist_to_ellipsoids(F).distance - dist2));
  }
  return {w1 <= 1e-8 && wd1 <= 1e-8 && w2 <= 1e-3 && wd2 <= 1e-3,
          "d=1 max |dPhi| " + sci(w1) + " |ddist| " + sci(wd1) + "; d=2 max |dPhi| " + sci(w2) + " |ddist| " + sci(wd2)};
}

Outcome c9_k_oracle() {
  double worst = 0.0;
  for (int q : {4, 6}) {
    const RadialKernel K = kernel_profile(KernelKind::K, 1, q, q, 241, QuadratureConfig{});
    const PiecewisePoly P = PiecewisePoly::convolution_power(IntervalSet({{-1.0, 1.0}}), q - 1);
    for (std::size_t i = 0; i < K.radii().size(); ++i)
      worst = std::max(worst, std::abs(K.values()[i] - P(K.radii()[i])));
  }
  return {worst <= 1e-6, "max |K_q - 1_B^{*(q-1)}| on [0, q], q = 4, 6: " + sci(worst)};
}

Outcome c10_first_variation() {
  bool ok = true;
  std::string detail;
  for (auto [d, q] : {std::pair{1, 4.0}, std::pair{1, 6.0}, std::pair{2, 4.0}}) {
    const auto r = first_variation_check(d, q, cell_centered_grid(0.0, 1.0, 256), cell_centered_grid(1.0, 4.0, 256),
                                         QuadratureConfig{});
    ok = ok && r.satisfied && r.margin > 0.0;
    detail += "(" + std::to_string(d) + "," + fix(q, 0) + ") margin " + sci(r.margin) + "  ";
  }
  return {ok, detail};
}

Outcome c11_slopes() {
  const std::vector<double> eps{0.08, 0.04, 0.02, 0.01};
  const SlopeResult a = remainder_slope(named_family("sliver", 1), 4.0, eps);
  const SlopeResult b = remainder_slope(named_family("mode:4", 2), 4.0, eps);
  const SlopeResult c = remainder_slope(named_family("sliver", 1), 3.0, eps);
  const bool ok = a.slope >= 2.1 && b.slope >= 2.1 && c.slope >= 1.9 && !a.noise_limited && !b.noise_limited &&
                  !c.noise_limited;
  return {ok, "q=4 d=1 sliver " + fix(a.slope, 3) + ", q=4 d=2 mode:4 " + fix(b.slope, 3) + ", q=3 d=1 sliver " +
                  fix(c.slope, 3) + (a.noise_limited || b.noise_limited || c.noise_limited ? " (noise-limited)" : "")};
}

Outcome c12_translation() {
  double worst_direct = 0.0, worst_sum = 0.0;
  for (int d : {1, 2}) {
    for (double t : {0.05, 0.02}) {
      const ExpansionReport r = expansion_report(named_family("translate", d)(t), 4.0);
      worst_direct = std::max(worst_direct, std::abs(r.direct - r.base));
      worst_sum = std::max(worst_sum, std::abs(r.term_sum() + r.residual));
    }
  }
  return {worst_direct <= 1e-7 && worst_sum <= 1e-7,
          "max |direct - base| " + sci(worst_direct) + ", max |terms + residual| " + sci(worst_sum)};
}

Outcome c13_balance() {
  int worst_it = 0;
  double worst_res = 0.0, worst_van = 0.0;
  for (std::uint64_t i = 0; i < 20; ++i) {
    Rng rng(1300 + i);
    const double eps = rng.uniform(0.01, 0.05);
    std::vector<double> a(6), b(6);
    double norm = 0.0;
    for (int n = 0; n < 6; ++n) {
      a[n] = rng.uniform(-1.0, 1.0);
      b[n] = rng.uniform(-1.0, 1.0);
      norm += a[n] * a[n] + b[n] * b[n];
    }
    for (int n = 0; n < 6; ++n) {
      a[n] *= eps / std::sqrt(norm);
      b[n] *= eps / std::sqrt(norm);
    }
    const BalanceResult r = balance(unit_measure_star(a, b));
    worst_it = std::max(worst_it, r.iterations);
    worst_res = std::max(worst_res, r.residual);
    const SphereProfile F = boundary_profile(r.balanced);
    for (int k = 0; k <= 2; ++k) worst_van = std::max(worst_van, vanishing_check(F, k));
  }
  return {worst_it <= 8 && worst_res < 1e-9 && worst_van <= 1e-8,
          "max iterations " + std::to_string(worst_it) + ", max residual " + sci(worst_res) + ", max vanishing " +
              sci(worst_van)};
}

Outcome c14_search() {
  bool ok = true;
  std::string detail;
  for (auto [d, q] : {std::pair{1, 4.0}, std::pair{1, 6.0}, std::pair{2, 4.0}}) {
    SearchConfig c;
    c.q = q;
    c.family = Family::parse(d == 1 ? "intervals:4" : "star:4");
    c.restarts = 200;
    c.budget = 1000;
    c.ascents = 4;
    c.seed = 14;
    c.quad = search_quadrature(d);
    const SearchResult r = random_probe(c);
    const bool pass = r.evaluations == 1000 && r.best_phi <= r.phi_ball + 1e-6;
    ok = ok && pass;
    detail += "(" + std::to_string(d) + "," + fix(q, 0) + ") gap " + sci(r.gap) + "  ";
  }
  return {ok, detail};
}

Outcome c15_quadratic_drop() {
  const QuadratureConfig cfg;
  const double base = phi_q(unit_ball(2), 4.0, cfg).norm_q_pow_q;
  const double c = 8.0 / (5.0 * kPi);
  double worst = 1e300;
  for (int seed = 1; seed <= 3; ++seed) {
    const SetFamily fam = named_family("corona:" + std::to_string(seed), 2);
    for (double eps : {0.02, 0.01}) {
      const SetModel E = fam(eps);
      const double sd = symdiff_measure(E, unit_ball(2));
      const double drop = base - phi_q(E, 4.0, cfg).norm_q_pow_q;
      worst = std::min(worst, drop / (c * sd * sd));
    }
  }
  return {worst >= 0.5, "min realized drop / ((8/(5 pi)) |E delta B|^2) over 3 seeds x eps {0.02, 0.01}: " + fix(worst, 4)};
}

Outcome c7_babenko() {
  const BabenkoStats s = babenko_stats();
  return {s.evaluations > 0 && s.violations == 0,
          std::to_string(s.evaluations) + " evaluations, " + std::to_string(s.violations) +
              " violations, max Phi/C = " + fix(s.worst_ratio, 6)};
}

}  // namespace

std::vector<CriterionResult> run_acceptance(std::ostream& out) {
  const std::vector<std::tuple<int, std::string, std::function<Outcome()>>> plan = {
      {1, "gamma(2,4) = 4", c1_gamma_2d},
      {2, "circle coefficients at q = 4", c2_circle_coeff},
      {3, "mode neutrality and gap at d = 2, q = 4", c3_mode_gap},
      {4, "gamma(1,4) = 2 two ways", c4_gamma_1d},
      {5, "Phi_4 of an interval and even-q oracle", c5_phi_interval},
      {6, "rho_2 and the small-r expansion", c6_rho},
      {8, "affine invariance", c8_affine},
      {9, "K_q piecewise-polynomial oracle", c9_k_oracle},
      {10, "first-variation condition", c10_first_variation},
      {11, "expansion remainder slopes", c11_slopes},
      {12, "translation neutrality", c12_translation},
      {13, "balance convergence", c13_balance},
      {14, "search null result", c14_search},
      {15, "local quadratic drop at d = 2, q = 4", c15_quadratic_drop},
      {7, "Babenko guard", c7_babenko},
  };
  std::vector<CriterionResult> results;
  for (const auto& [id, title, fn] : plan) {
    CriterionResult r;
    r.id = id;
    r.title = title;
    const auto t0 = Clock::now();
    try {
      const Outcome o = fn();
      r.pass = o.pass;
      r.detail = o.detail;
    } catch (const std::exception& e) {
      r.pass = false;
      r.detail = std::string("exception: ") + e.what();
    }
    r.seconds = seconds_since(t0);
    out << (r.pass ? "PASS" : "FAIL") << " [" << std::setw(2) << id << "] " << title << ": " << r.detail << " ("
        << fix(r.seconds, 1) << " s)" << std::endl;
    results.push_back(r);
  }
  return results;
}

}  // namespace felab
