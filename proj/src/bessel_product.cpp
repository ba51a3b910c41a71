#include "felab/bessel_product.hpp"

#include <boost/math/special_functions/bessel.hpp>
#include <algorithm>
#include <cmath>
#include <map>

#include "felab/errors.hpp"

namespace felab {

namespace {

using cplx = std::complex<double>;
using Series = std::vector<cplx>;  // coefficients of y^0 .. y^K

Series series_mul(const Series& a, const Series& b) {
  Series c(a.size(), 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0.0) continue;
    for (std::size_t j = 0; i + j < a.size(); ++j) c[i + j] += a[i] * b[j];
  }
  return c;
}

Series series_exp(const Series& s) {
  Series e(s.size(), 0.0);
  e[0] = std::exp(s[0]);
  for (std::size_t n = 1; n < s.size(); ++n) {
    cplx acc = 0.0;
    for (std::size_t k = 1; k <= n; ++k) acc += static_cast<double>(k) * s[k] * e[n - k];
    e[n] = acc / static_cast<double>(n);
  }
  return e;
}

// log of a series with leading coefficient 1.
Series series_log1(const Series& a) {
  Series l(a.size(), 0.0);
  for (std::size_t n = 1; n < a.size(); ++n) {
    cplx acc = 0.0;
    for (std::size_t k = 1; k < n; ++k) acc += static_cast<double>(k) * l[k] * a[n - k];
    l[n] = a[n] - acc / static_cast<double>(n);
  }
  return l;
}

Series series_inv(const Series& a) {
  Series b(a.size(), 0.0);
  b[0] = 1.0 / a[0];
  for (std::size_t n = 1; n < a.size(); ++n) {
    cplx acc = 0.0;
    for (std::size_t k = 1; k <= n; ++k) acc += a[k] * b[n - k];
    b[n] = -acc / a[0];
  }
  return b;
}

double rgamma(double x) {
  const double r = std::round(x);
  if (r <= 0.0 && std::abs(x - r) < 1e-12) return 0.0;
  if (x > 0.0) return std::exp(-std::lgamma(x));
  // Reflection: 1/Gamma(x) = sin(pi x) Gamma(1-x) / pi.
  return std::sin(kPi * x) * std::exp(std::lgamma(1.0 - x)) / kPi;
}

bool is_integer(double v) { return std::abs(v - std::round(v)) < 1e-12; }

// Expansion polynomial in the factor (sgn^odd |cos|^s terminates).
bool factor_is_polynomial(const BesselFactor& f) {
  if (!is_integer(f.power)) return false;
  const long s = std::lround(f.power);
  return f.odd ? (s % 2 == 1) : (s % 2 == 0);
}

struct Term {
  double omega;
  Series coef;  // coefficients of rho^{-k}
};

struct Expansion {
  double base_power = 0.0;  // rho^base multiplies every term
  std::vector<Term> terms;
  double truncation = 0.0;  // relative size of neglected harmonics
};

void merge_terms(std::vector<Term>& terms) {
  std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) { return a.omega < b.omega; });
  std::vector<Term> out;
  for (auto& t : terms) {
    if (!out.empty() && std::abs(out.back().omega - t.omega) <= 1e-10 * (1.0 + std::abs(t.omega))) {
      for (std::size_t k = 0; k < t.coef.size(); ++k) out.back().coef[k] += t.coef[k];
    } else {
      out.push_back(std::move(t));
    }
  }
  terms.swap(out);
}

Expansion expand_factor(const BesselFactor& f, int K, int max_harmonics) {
  const double nu = f.order, s = f.power, beta = f.scale;
  const double mu = 4.0 * nu * nu;
  // Modulus: M~^2 = 1 + sum_k prod_j (mu-(2j-1)^2) (2k-1)!!/(2k)!! (2x)^{-2k}.
  Series m2(K + 1, 0.0);
  m2[0] = 1.0;
  double prod = 1.0;
  for (int k = 1; 2 * k <= K; ++k) {
    prod *= (mu - (2.0 * k - 1) * (2.0 * k - 1)) * (2.0 * k - 1) / (2.0 * k) / 4.0;
    m2[2 * k] = prod;
  }
  // Phase correction from the Wronskian: phi' = 1/M~^2 - 1, phi(inf) = 0.
  const Series inv = series_inv(m2);
  Series phi(K + 1, 0.0);
  for (int k = 1; 2 * k - 1 <= K; ++k)
    if (2 * k <= K) phi[2 * k - 1] = -inv[2 * k] / (2.0 * k - 1);
  Series logm = series_log1(m2);
  for (auto& c : logm) c *= 0.5 * s;
  const double phi0 = -0.5 * nu * kPi - 0.25 * kPi;
  const double amp = std::pow(2.0 / (kPi * beta), 0.5 * s);

  Expansion e;
  e.base_power = -0.5 * s;
  const bool poly = factor_is_polynomial(f);
  const int hmax = poly ? static_cast<int>(std::lround(s)) / 2 + 1 : max_harmonics;
  const double c0 = std::abs(abs_cos_power_coefficient(s, f.odd, 0));
  double last = 0.0;
  for (int m = 0; m <= hmax; ++m) {
    const double c = abs_cos_power_coefficient(s, f.odd, m);
    if (std::abs(c) < 1e-17 * c0) continue;
    last = std::abs(c);
    const int mp = 2 * m + (f.odd ? 1 : 0);
    if (mp == 0) {
      Series ser = series_exp(logm);
      for (auto& v : ser) v *= c * amp;
      e.terms.push_back({0.0, ser});
      continue;
    }
    Series arg = logm;
    for (int k = 0; k <= K; ++k) arg[k] += cplx(0.0, mp * phi[k].real());
    Series plus = series_exp(arg);
    const cplx ph = std::polar(1.0, mp * phi0);
    Series sp(K + 1), sm(K + 1);
    for (int k = 0; k <= K; ++k) {
      sp[k] = 0.5 * c * amp * ph * plus[k];
      sm[k] = std::conj(sp[k]);
    }
    e.terms.push_back({mp * beta, sp});
    e.terms.push_back({-mp * beta, sm});
  }
  if (!poly) e.truncation = last * hmax / std::max(s, 0.5);
  // Convert y = 1/(beta rho) to powers of 1/rho.
  for (auto& t : e.terms) {
    double sc = 1.0;
    for (int k = 0; k <= K; ++k) {
      t.coef[k] *= sc;
      sc /= beta;
    }
  }
  return e;
}

Expansion expand_product(const BesselProduct& p, int K, int max_harmonics) {
  Expansion acc;
  Series one(K + 1, 0.0);
  one[0] = p.prefactor;
  acc.terms.push_back({0.0, one});
  acc.base_power = p.rho_power;
  for (const auto& f : p.factors) {
    Expansion e = expand_factor(f, K, max_harmonics);
    std::vector<Term> out;
    out.reserve(acc.terms.size() * e.terms.size());
    for (const auto& a : acc.terms)
      for (const auto& b : e.terms) out.push_back({a.omega + b.omega, series_mul(a.coef, b.coef)});
    merge_terms(out);
    acc.terms.swap(out);
    acc.base_power += e.base_power;
    acc.truncation += e.truncation;
  }
  return acc;
}

std::vector<double> factor_zeros(const BesselFactor& f, double R) {
  std::vector<double> z;
  if (f.order < 0.0) return z;
  const double xmax = f.scale * R;
  const int count = static_cast<int>(xmax / kPi) + 2;
  std::vector<double> zs;
  boost::math::cyl_bessel_j_zero(f.order, 1, count, std::back_inserter(zs));
  for (double x : zs)
    if (x < xmax) z.push_back(x / f.scale);
  return z;
}

}  // namespace

double abs_cos_power_coefficient(double s, bool odd, int m) {
  const double lead = std::lgamma(s + 1.0) - s * std::log(2.0);
  if (!odd) {
    if (m == 0) return std::exp(lead - 2.0 * std::lgamma(0.5 * s + 1.0));
    return 2.0 * std::exp(lead) * rgamma(0.5 * s + m + 1.0) * rgamma(0.5 * s - m + 1.0);
  }
  return 2.0 * std::exp(lead) * rgamma(0.5 * (s + 2 * m + 3)) * rgamma(0.5 * (s - 2 * m + 1));
}

double bessel_product_integrand(const BesselProduct& p, double rho) {
  double v = p.prefactor;
  double power = p.rho_power;
  for (const auto& f : p.factors) {
    const double x = f.scale * rho;
    const double jn = bessel_j_scaled(f.order, x);
    double a = std::abs(jn);
    if (f.power == 1.0) {
    } else if (f.power == 2.0) {
      a *= a;
    } else {
      a = std::pow(a, f.power);
    }
    if (f.odd && jn < 0.0) a = -a;
    v *= a * std::pow(f.scale, f.order * f.power);
    power += f.order * f.power;
  }
  if (power != 0.0) v *= std::pow(rho, power);
  return v;
}

IntegralResult bessel_product_tail(const BesselProduct& p, double R, const BesselProductOptions& opt,
                                   double* imag_residue) {
  const int K = opt.series_order;
  const Expansion e = expand_product(p, K, opt.max_harmonics);
  cplx total = 0.0, last_order = 0.0;
  double mag = 0.0;
  for (const auto& t : e.terms) {
    for (int k = 0; k <= K; ++k) {
      if (t.coef[k] == 0.0) continue;
      const double pk = static_cast<double>(k) - e.base_power;
      if (t.omega == 0.0 && !(pk > 1.0))
        throw DomainError("bessel product integral diverges: non-oscillating tail decays too slowly");
      const cplx ep = expint_p(pk, cplx(0.0, -t.omega * R));
      const cplx c = t.coef[k] * std::pow(R, 1.0 - pk) * ep;
      total += c;
      if (k >= K - 1) last_order += c;
      if (k == 0) mag += std::abs(t.coef[0]) * std::pow(R, 1.0 - pk) / std::max(1.0, std::abs(t.omega) * R);
    }
  }
  if (imag_residue) *imag_residue = total.imag();
  double err = std::abs(last_order) + e.truncation * mag + 1e-15 * mag;
  return IntegralResult{total.real(), err, true};
}

IntegralResult integrate_bessel_product(const BesselProduct& p, const QuadratureConfig& cfg,
                                        const BesselProductOptions& opt) {
  if (p.factors.empty()) throw DomainError("integrate_bessel_product: no factors");
  bool poly = true;
  double beta_min = p.factors.front().scale, omega = 0.0;
  for (const auto& f : p.factors) {
    if (!(f.scale > 0.0)) throw DomainError("integrate_bessel_product: factor scale must be positive");
    poly = poly && factor_is_polynomial(f);
    beta_min = std::min(beta_min, f.scale);
    omega += f.scale * std::max(1.0, f.power);
  }
  double R = std::max(poly ? opt.min_cut_polynomial : opt.min_cut_general, opt.asymptotic_argument / beta_min);
  bool capped = false;
  if (R > opt.max_cut) {
    R = opt.max_cut;
    capped = true;
  }
  const double width = std::min(0.5, kPi / omega);
  const int panels = static_cast<int>(std::ceil(R / width));
  std::vector<double> bp;
  bp.reserve(panels + 1);
  for (int i = 0; i <= panels; ++i) bp.push_back(R * i / panels);
  for (const auto& f : p.factors) {
    if (factor_is_polynomial(f)) continue;
    for (double z : factor_zeros(f, R)) bp.push_back(z);
  }
  std::sort(bp.begin(), bp.end());
  std::vector<double> cleaned;
  for (double x : bp)
    if (cleaned.empty() || x - cleaned.back() > 1e-9 * R) cleaned.push_back(x);
  if (cleaned.back() < R) cleaned.back() = R;
  QuadratureConfig qc = cfg;
  qc.max_subdivisions = std::max(cfg.max_subdivisions, 4 * static_cast<int>(cleaned.size()));
  const IntegralResult head =
      integrate_adaptive([&](double rho) { return bessel_product_integrand(p, rho); }, cleaned, qc);
  const IntegralResult tail = bessel_product_tail(p, R, opt);
  IntegralResult r;
  r.value = head.value + tail.value;
  r.error_estimate = head.error_estimate + tail.error_estimate;
  if (capped) r.error_estimate += std::abs(tail.value);
  r.converged = head.converged && !capped && r.error_estimate <= cfg.target(r.value);
  return r;
}

}  // namespace felab
