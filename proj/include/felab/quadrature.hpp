#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <vector>

namespace felab {

struct QuadratureConfig {
  double abs_tol = 1e-10;
  double rel_tol = 1e-8;
  int max_subdivisions = 2000;
  int oscillatory_tail_terms = 40;
  // Cutoff for truncated frequency-side integrals; 0 selects a per-method default.
  double frequency_cutoff = 0.0;

  void validate() const;
  double target(double value) const;
};

struct IntegralResult {
  double value = 0.0;
  double error_estimate = 0.0;
  bool converged = true;
};

constexpr double kPi = 3.14159265358979323846;

// J_nu(x) for nu a nonnegative half-integer (nu = -1/2 is accepted as well).
double bessel_j(double order, double x);

// J_nu(x) / x^nu, finite at x = 0.
double bessel_j_scaled(double order, double x);

// Volume of the unit ball in R^d, with omega_0 = 1.
double ball_volume(int d);

// Surface measure of S^{d-1}; |S^0| = 2.
double sphere_area(int d);

using RealFn = std::function<double(double)>;

IntegralResult integrate_adaptive(const RealFn& f, double a, double b, const QuadratureConfig& cfg);

// Adaptive integration started from an initial partition (sorted breakpoints, size >= 2).
IntegralResult integrate_adaptive(const RealFn& f, const std::vector<double>& breakpoints,
                                  const QuadratureConfig& cfg);

// Integral of f over [zero(0), inf) where zero(k) enumerates increasing points with
// f eventually alternating (or keeping) sign between consecutive entries.
IntegralResult integrate_oscillatory_tail(const RealFn& f, const std::function<double(long)>& zero,
                                          const QuadratureConfig& cfg);

double gegenbauer(int k, double lambda, double t);

// E_p(z) = int_1^inf exp(-z t) t^{-p} dt for Re z >= 0, p > 0 (p > 1 when z = 0).
std::complex<double> expint_p(double p, std::complex<double> z);

// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

// Vector-valued Gauss-Kronrod 7/15 on one panel; returns per-component value and error.
template <std::size_t M, class F>
void gk15_vec(const F& f, double a, double b, std::array<double, M>& value,
              std::array<double, M>& error);

// Vector-valued adaptive integration: bisects panels until every component meets
// tol_abs[i] + rel_tol*|value_i| or the subdivision budget runs out.
template <std::size_t M, class F>
bool integrate_panels_vec(const F& f, const std::vector<double>& breakpoints,
                          const std::array<double, M>& tol_abs, double rel_tol, int max_subdivisions,
                          std::array<double, M>& value, std::array<double, M>& error);

namespace detail {
extern const double kGK15Nodes[8];
extern const double kGK15Weights[8];
extern const double kG7Weights[4];
}  // namespace detail

template <std::size_t M, class F>
void gk15_vec(const F& f, double a, double b, std::array<double, M>& value,
              std::array<double, M>& error) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  std::array<double, M> k{}, g{};
  for (int j = 0; j < 8; ++j) {
    const double x = detail::kGK15Nodes[j];
    auto add = [&](const std::array<double, M>& v) {
      for (std::size_t i = 0; i < M; ++i) {
        k[i] += detail::kGK15Weights[j] * v[i];
        if (j % 2 == 1) g[i] += detail::kG7Weights[j / 2] * v[i];
      }
    };
    if (j == 7) {
      add(f(c));
    } else {
      add(f(c - h * x));
      add(f(c + h * x));
    }
  }
  for (std::size_t i = 0; i < M; ++i) {
    value[i] = h * k[i];
    error[i] = std::abs(h * (k[i] - g[i]));
  }
}

template <std::size_t M, class F>
bool integrate_panels_vec(const F& f, const std::vector<double>& breakpoints,
                          const std::array<double, M>& tol_abs, double rel_tol, int max_subdivisions,
                          std::array<double, M>& value, std::array<double, M>& error) {
  struct Panel {
    double a, b;
    std::array<double, M> v, e;
  };
  std::vector<Panel> done, work;
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    Panel p{breakpoints[i], breakpoints[i + 1], {}, {}};
    gk15_vec<M>(f, p.a, p.b, p.v, p.e);
    work.push_back(p);
  }
  const double total_len = breakpoints.back() - breakpoints.front();
  int budget = max_subdivisions;
  bool ok = true;
  // Depth-first refinement in index order keeps the result reproducible.
  while (!work.empty()) {
    Panel p = work.back();
    work.pop_back();
    bool accept = true;
    const double frac = (p.b - p.a) / total_len;
    for (std::size_t i = 0; i < M; ++i) {
      const double allow = frac * tol_abs[i] + rel_tol * std::abs(p.v[i]);
      if (p.e[i] > allow) accept = false;
    }
    if (accept || budget <= 0 || p.b - p.a < 1e-12 * total_len) {
      if (!accept) ok = false;
      done.push_back(p);
      continue;
    }
    --budget;
    const double m = 0.5 * (p.a + p.b);
    Panel l{p.a, m, {}, {}}, r{m, p.b, {}, {}};
    gk15_vec<M>(f, l.a, l.b, l.v, l.e);
    gk15_vec<M>(f, r.a, r.b, r.v, r.e);
    work.push_back(r);
    work.push_back(l);
  }
  std::sort(done.begin(), done.end(), [](const Panel& x, const Panel& y) { return x.a < y.a; });
  value.fill(0.0);
  error.fill(0.0);
  for (const auto& p : done)
    for (std::size_t i = 0; i < M; ++i) {
      value[i] += p.v[i];
      error[i] += p.e[i];
    }
  return ok;
}

}  // namespace felab
