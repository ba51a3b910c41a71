#include "felab/quadrature.hpp"

#include <boost/math/special_functions/bessel.hpp>
#include <cmath>
#include <limits>
#include <queue>
#include <string>

#include "felab/errors.hpp"

namespace felab {

namespace detail {
const double kGK15Nodes[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                              0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                              0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                              0.207784955007898467600689403773245, 0.0};
const double kGK15Weights[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                                0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                                0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                                0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
const double kG7Weights[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                              0.381830050505118944950369775488975, 0.417959183673469387755102040816327};
}  // namespace detail

void QuadratureConfig::validate() const {
  if (!(abs_tol >= 0.0) || !(rel_tol >= 0.0) || !(abs_tol + rel_tol > 0.0))
    throw DomainError("quadrature tolerances must be nonnegative with positive sum");
  if (max_subdivisions < 1) throw DomainError("max_subdivisions must be at least 1");
  if (oscillatory_tail_terms < 1) throw DomainError("oscillatory_tail_terms must be positive");
}

double QuadratureConfig::target(double value) const { return std::max(abs_tol, rel_tol * std::abs(value)); }

namespace {

bool is_half_integer(double v) { return std::abs(2.0 * v - std::round(2.0 * v)) < 1e-14; }

// Spherical Bessel j_n by upward recurrence; stable for x >= n.
double sph_j_upward(int n, double x) {
  const double s = std::sin(x), c = std::cos(x);
  double j0 = s / x;
  if (n == 0) return j0;
  double j1 = s / (x * x) - c / x;
  for (int k = 1; k < n; ++k) {
    const double j2 = (2 * k + 1) / x * j1 - j0;
    j0 = j1;
    j1 = j2;
  }
  return j1;
}

}  // namespace

double bessel_j(double order, double x) {
  if (!std::isfinite(x) || !std::isfinite(order)) throw DomainError("bessel_j: non-finite argument");
  if (x < 0.0) throw DomainError("bessel_j: negative argument");
  if (!is_half_integer(order) || order < -0.5) throw DomainError("bessel_j: order must be a half-integer >= 0");
  const double twice = std::round(2.0 * order);
  if (static_cast<long>(twice) % 2 == 0) {
    return boost::math::cyl_bessel_j(std::round(order), x);
  }
  if (twice < 0) {  // order -1/2
    if (x == 0.0) return std::numeric_limits<double>::infinity();
    return std::sqrt(2.0 / (kPi * x)) * std::cos(x);
  }
  if (x == 0.0) return 0.0;
  const int n = static_cast<int>((twice - 1) / 2);
  const double jn = (x >= n) ? sph_j_upward(n, x) : boost::math::sph_bessel(n, x);
  return std::sqrt(2.0 * x / kPi) * jn;
}

double bessel_j_scaled(double order, double x) {
  if (x <= 2.0) {
    const double y = -0.25 * x * x;
    double term = 1.0 / (std::pow(2.0, order) * std::tgamma(order + 1.0));
    double sum = term;
    for (int k = 1; k < 60; ++k) {
      term *= y / (k * (order + k));
      sum += term;
      if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    }
    return sum;
  }
  return bessel_j(order, x) / std::pow(x, order);
}

double ball_volume(int d) { return std::pow(kPi, 0.5 * d) / std::tgamma(0.5 * d + 1.0); }

double sphere_area(int d) { return 2.0 * std::pow(kPi, 0.5 * d) / std::tgamma(0.5 * d); }

namespace {

struct Segment {
  double a, b, value, error;
  long order;  // creation index; ties broken deterministically
};

struct SegmentLess {
  bool operator()(const Segment& x, const Segment& y) const {
    if (x.error != y.error) return x.error < y.error;
    return x.order > y.order;
  }
};

Segment gk15(const RealFn& f, double a, double b, long order) {
  std::array<double, 1> v{}, e{};
  gk15_vec<1>([&](double x) { return std::array<double, 1>{f(x)}; }, a, b, v, e);
  return Segment{a, b, v[0], e[0], order};
}

}  // namespace

IntegralResult integrate_adaptive(const RealFn& f, const std::vector<double>& breakpoints,
                                  const QuadratureConfig& cfg) {
  cfg.validate();
  if (breakpoints.size() < 2) throw DomainError("integrate_adaptive: need at least two breakpoints");
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i)
    if (!(breakpoints[i] < breakpoints[i + 1])) throw DomainError("integrate_adaptive: require a < b");
  std::priority_queue<Segment, std::vector<Segment>, SegmentLess> heap;
  long counter = 0;
  double value = 0.0, error = 0.0;
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    Segment s = gk15(f, breakpoints[i], breakpoints[i + 1], counter++);
    value += s.value;
    error += s.error;
    heap.push(s);
  }
  int subdivisions = 0;
  bool finite = std::isfinite(value) && std::isfinite(error);
  while (finite && error > cfg.target(value) && subdivisions < cfg.max_subdivisions) {
    Segment s = heap.top();
    heap.pop();
    const double m = 0.5 * (s.a + s.b);
    if (!(m > s.a && m < s.b)) {  // interval exhausted at machine resolution
      heap.push(s);
      break;
    }
    Segment l = gk15(f, s.a, m, counter++);
    Segment r = gk15(f, m, s.b, counter++);
    value += l.value + r.value - s.value;
    error += l.error + r.error - s.error;
    heap.push(l);
    heap.push(r);
    ++subdivisions;
    finite = std::isfinite(value) && std::isfinite(error);
  }
  // Re-sum in position order to remove drift from incremental updates.
  std::vector<Segment> all;
  all.reserve(heap.size());
  while (!heap.empty()) {
    all.push_back(heap.top());
    heap.pop();
  }
  std::sort(all.begin(), all.end(), [](const Segment& x, const Segment& y) { return x.a < y.a; });
  value = 0.0;
  error = 0.0;
  for (const auto& s : all) {
    value += s.value;
    error += s.error;
  }
  IntegralResult res{value, error, std::isfinite(value) && error <= cfg.target(value)};
  return res;
}

IntegralResult integrate_adaptive(const RealFn& f, double a, double b, const QuadratureConfig& cfg) {
  return integrate_adaptive(f, std::vector<double>{a, b}, cfg);
}

namespace {

// Iterated Aitken delta-squared on partial sums; returns (estimate, error).
std::pair<double, double> iterated_aitken(std::vector<double> s) {
  double prev = s.back(), err = std::abs(s.back() - s[s.size() - 2]);
  while (s.size() >= 3) {
    std::vector<double> t;
    for (std::size_t i = 0; i + 2 < s.size(); ++i) {
      const double d1 = s[i + 1] - s[i], d2 = s[i + 2] - s[i + 1];
      const double den = d2 - d1;
      if (den == 0.0 || !std::isfinite(den)) {
        t.push_back(s[i + 2]);
      } else {
        t.push_back(s[i + 2] - d2 * d2 / den);
      }
    }
    err = std::abs(t.back() - prev);
    prev = t.back();
    s.swap(t);
  }
  return {prev, err};
}

// Levin u-transform of partial sums s with terms a (a[j] = s[j]-s[j-1]).
double levin_u(const std::vector<double>& s, const std::vector<double>& a, std::size_t n0, std::size_t k) {
  const double beta = 1.0;
  double num = 0.0, den = 0.0, binom = 1.0;
  for (std::size_t j = 0; j <= k; ++j) {
    if (j > 0) binom *= static_cast<double>(k - j + 1) / static_cast<double>(j);
    const double m = static_cast<double>(n0 + j);
    const double ratio = std::pow((beta + m) / (beta + n0 + k), static_cast<double>(k) - 1.0);
    const double omega = (beta + m) * a[n0 + j];
    const double c = ((j % 2) ? -1.0 : 1.0) * binom * ratio / omega;
    num += c * s[n0 + j];
    den += c;
  }
  return num / den;
}

}  // namespace

IntegralResult integrate_oscillatory_tail(const RealFn& f, const std::function<double(long)>& zero,
                                          const QuadratureConfig& cfg) {
  cfg.validate();
  const int n = std::max(8, cfg.oscillatory_tail_terms);
  QuadratureConfig seg_cfg = cfg;
  seg_cfg.abs_tol = cfg.abs_tol / (4.0 * n);
  seg_cfg.rel_tol = cfg.rel_tol / 4.0;
  std::vector<double> terms, sums;
  double acc = 0.0, seg_err = 0.0;
  bool seg_ok = true;
  for (long k = 0; k < n; ++k) {
    const double a = zero(k), b = zero(k + 1);
    if (!(b > a)) throw DomainError("integrate_oscillatory_tail: zeros must increase");
    const IntegralResult r = integrate_adaptive(f, a, b, seg_cfg);
    seg_ok = seg_ok && r.converged;
    seg_err += r.error_estimate;
    acc += r.value;
    terms.push_back(r.value);
    sums.push_back(acc);
  }
  bool all_zero = true;
  for (double t : terms) all_zero = all_zero && t == 0.0;
  if (all_zero) return IntegralResult{0.0, seg_err, seg_ok};

  const std::size_t half = terms.size() / 2;
  bool alternating = true, same_sign = true;
  for (std::size_t i = half; i + 1 < terms.size(); ++i) {
    if (!(terms[i] * terms[i + 1] < 0.0)) alternating = false;
    if (!(terms[i] * terms[i + 1] > 0.0)) same_sign = false;
  }
  double value = acc, err = 0.0;
  bool accelerated = false;
  if (alternating) {
    auto [v, e] = iterated_aitken(std::vector<double>(sums.begin() + static_cast<long>(half) / 2, sums.end()));
    value = v;
    err = e;
    accelerated = std::isfinite(v);
  } else if (same_sign) {
    const std::size_t n0 = 1;
    const std::size_t kmax = std::min<std::size_t>(terms.size() - n0 - 1, 16);
    const double l1 = levin_u(sums, terms, n0, kmax), l0 = levin_u(sums, terms, n0, kmax - 1);
    if (std::isfinite(l1) && std::isfinite(l0)) {
      value = l1;
      err = std::abs(l1 - l0);
      accelerated = true;
    }
  }
  if (!accelerated) {
    // Truncation: tail bounded by the size of the last segment times the remaining count proxy.
    value = acc;
    err = std::abs(terms.back()) * n;
  }
  err += seg_err;
  return IntegralResult{value, err, seg_ok && accelerated && err <= cfg.target(value)};
}

double gegenbauer(int k, double lambda, double t) {
  if (k < 0) throw DomainError("gegenbauer: k must be nonnegative");
  if (!(lambda > -0.5)) throw DomainError("gegenbauer: lambda must exceed -1/2");
  if (!(std::abs(t) <= 1.0)) throw DomainError("gegenbauer: |t| must not exceed 1");
  if (k == 0) return 1.0;
  if (lambda == 0.0) {
    double t0 = 1.0, t1 = t;
    for (int n = 2; n <= k; ++n) {
      const double t2 = 2.0 * t * t1 - t0;
      t0 = t1;
      t1 = t2;
    }
    return t1;
  }
  double c0 = 1.0, c1 = 2.0 * lambda * t;
  for (int n = 2; n <= k; ++n) {
    const double c2 = (2.0 * t * (n + lambda - 1.0) * c1 - (n + 2.0 * lambda - 2.0) * c0) / n;
    c0 = c1;
    c1 = c2;
  }
  return c1;
}

namespace {

std::complex<double> expint_cf(double p, std::complex<double> z) {
  using C = std::complex<double>;
  const double tiny = 1e-300;
  C b = z + p;
  C c = 1.0 / tiny;
  C d = 1.0 / b;
  C h = d;
  for (int i = 1; i < 5000; ++i) {
    const double an = -static_cast<double>(i) * (p - 1.0 + i);
    b += 2.0;
    d = 1.0 / (an * d + b);
    c = b + an / c;
    const C del = c * d;
    h *= del;
    if (std::abs(del - 1.0) < 1e-16) break;
  }
  return h * std::exp(-z);
}

}  // namespace

std::complex<double> expint_p(double p, std::complex<double> z) {
  if (z.real() < 0.0) throw DomainError("expint_p: Re z must be nonnegative");
  const double az = std::abs(z);
  if (az == 0.0) {
    if (!(p > 1.0)) throw DomainError("expint_p: divergent at z = 0 with p <= 1");
    return {1.0 / (p - 1.0), 0.0};
  }
  if (az >= 1.0) return expint_cf(p, z);
  // Split at T = 1/|z|: smooth log-variable quadrature below, continued fraction above.
  const double T = 1.0 / az;
  const double U = std::log(T);
  QuadratureConfig cfg;
  cfg.abs_tol = 1e-15;
  cfg.rel_tol = 1e-14;
  cfg.max_subdivisions = 400;
  auto integrand = [&](double u, bool imag) {
    const double t = std::exp(u);
    const std::complex<double> v = std::exp(-z * t + (1.0 - p) * u);
    return imag ? v.imag() : v.real();
  };
  const double re = integrate_adaptive([&](double u) { return integrand(u, false); }, 0.0, U, cfg).value;
  const double im = integrate_adaptive([&](double u) { return integrand(u, true); }, 0.0, U, cfg).value;
  return std::complex<double>(re, im) + std::pow(T, 1.0 - p) * expint_cf(p, z * T);
}

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) {
        p1 = x;
        p0 = 1.0;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    nodes[i] = -x;
    nodes[n - 1 - i] = x;
    weights[i] = weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
}

}  // namespace felab
