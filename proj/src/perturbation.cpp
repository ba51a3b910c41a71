#include "felab/perturbation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>

#include "felab/errors.hpp"
#include "felab/functional.hpp"
#include "felab/parallel.hpp"
#include "felab/radial_kernels.hpp"
#include "felab/random.hpp"

namespace felab {

std::string to_string(RemainderOrder r) {
  switch (r) {
    case RemainderOrder::two_plus_rho: return "O(eps^{2+rho})";
    case RemainderOrder::two: return "O(eps^2)";
    case RemainderOrder::q_minus_one: return "O(eps^{q-1})";
  }
  return "unknown";
}

namespace {

constexpr double kTwoPi = 2.0 * kPi;

// (1 + h)^a - 1 - a h - a(a-1)/2 h^2 for |h| < 1/2.
double binomial_tail3(double a, double h) {
  double c = 0.5 * a * (a - 1.0), hk = h * h, sum = 0.0;
  for (int k = 3; k < 200; ++k) {
    c *= (a - k + 1.0) / k;
    hk *= h;
    const double t = c * hk;
    sum += t;
    if (c == 0.0 || std::abs(t) <= 1e-17 * std::abs(sum)) break;
  }
  return sum;
}

// Components: |u+z|^q, |u|^q, K term, LL term, Lrefl term, remainder, with u = 1_B^ (real)
// and z = f^. The remainder is assembled without cancellation where the binomial series
// converges fast, so it stays accurate when it is many orders below the other terms.
FreqVec expansion_integrand(double q, bool first_order, double u, std::complex<double> z) {
  const double rez = z.real(), z2 = std::norm(z);
  const double au = std::abs(u);
  const double aq2 = std::pow(au, q - 2.0);
  FreqVec v{};
  v[0] = std::pow(std::norm(u + z), 0.5 * q);
  v[1] = aq2 * au * au;
  v[2] = q * aq2 * u * rez;
  if (first_order) {
    v[5] = v[0] - v[1] - v[2];
    return v;
  }
  v[3] = 0.25 * q * q * aq2 * z2;
  v[4] = 0.25 * q * (q - 2.0) * aq2 * (z * z).real();
  const double s0 = u * u, x = 2.0 * u * rez + z2;
  const double cubic_quartic = 4.0 * u * rez * z2 + z2 * z2;
  if (q == 4.0) {
    v[5] = cubic_quartic;
  } else if (s0 > 0.0 && std::abs(x) < 0.5 * s0) {
    v[5] = v[1] * binomial_tail3(0.5 * q, x / s0) + 0.125 * q * (q - 2.0) * std::pow(au, q - 4.0) * cubic_quartic;
  } else {
    v[5] = v[0] - v[1] - v[2] - v[3] - v[4];
  }
  return v;
}

struct FrequencyTerms {
  FrequencyIntegral fi;
  bool first_order = false;
};

FrequencyTerms frequency_terms(const SetModel& E, double q, double symdiff, const QuadratureConfig& cfg) {
  const int d = dimension(E);
  FrequencyTerms out;
  out.first_order = d == 1 && q < 3.0;
  FrequencyOptions o;
  const double diam = set_diameter(E);
  if (cfg.frequency_cutoff > 0.0) {
    o.cutoff = cfg.frequency_cutoff;
  } else if (d == 1) {
    // f^ decays only past 1 / (feature size); the cutoff must clear that scale.
    o.cutoff = std::max(default_cutoff(E, q), symdiff > 0.0 ? 40.0 / symdiff : 0.0);
  } else {
    o.cutoff = 32.0;
  }
  o.rel_tol = std::min(1e-10, cfg.rel_tol);
  o.abs_tol.fill(1e-3 * cfg.abs_tol);
  o.abs_tol[0] = o.abs_tol[1] = cfg.abs_tol;
  o.max_subdivisions = std::max(cfg.max_subdivisions, 4000);
  // In d = 2 the z-dependent components decay like rho^{-1}..rho^{-4} until rho ~ 1/eps
  // and only then at the asymptotic rate, so their tail error is the last shell itself.
  o.tail_exponent.fill(d == 1 ? q : 1.5 * q - 1.0);
  if (d == 2)
    for (std::size_t i = 2; i < kFreqComponents; ++i) o.shell_bounded_tail[i] = true;
  o.panel_width = d == 1 ? 0.5 / std::max(1.0, 0.5 * q * diam) : 1.0 / std::max(1.0, 0.25 * q * diam);
  double last_rho = -1.0, last_u = 0.0;
  const bool first = out.first_order;
  out.fi = integrate_frequency(
      E,
      [&](double rho, std::complex<double> hat) {
        if (rho != last_rho) {
          last_rho = rho;
          last_u = ball_hat(d, rho);
        }
        return expansion_integrand(q, first, last_u, hat - last_u);
      },
      o);
  return out;
}

void check_expansion_q(int d, double q) {
  if (!std::isfinite(q) || !(q > 2.0)) throw DomainError("expansion requires a finite exponent q > 2");
  if (d == 2 && q < 3.0) throw ThresholdError("expansion about the disc requires q >= 3 in d = 2", 3.0);
}

double unit_symdiff(const SetModel& E) { return symdiff_measure(E, unit_ball(dimension(E))); }

}  // namespace

IntegralResult inner_K(const SetModel& E, double q, const QuadratureConfig& cfg) {
  const int d = dimension(E);
  require_above_threshold(KernelKind::K, d, q);
  auto K = [&](double r) { return kernel_value(KernelKind::K, d, q, r, cfg).value; };
  IntegralResult out;
  if (d == 1) {
    const auto& iv = std::get<IntervalSet>(E);
    auto add = [&](double a, double b, double sign) {
      if (!(b > a)) return;
      const IntegralResult r = integrate_adaptive([&](double x) { return K(std::abs(x)); }, a, b, cfg);
      out.value += sign * r.value;
      out.error_estimate += r.error_estimate;
      out.converged &= r.converged;
    };
    // E \ B
    for (const auto& [l, r] : iv.intervals()) {
      add(l, std::min(r, -1.0), 1.0);
      add(std::max(l, 1.0), r, 1.0);
    }
    // B \ E: the gaps of E inside [-1, 1]
    double cursor = -1.0;
    for (const auto& [l, r] : iv.intervals()) {
      if (r <= -1.0) continue;
      if (l >= 1.0) break;
      add(cursor, std::min(l, 1.0), -1.0);
      cursor = std::max(cursor, r);
    }
    add(cursor, 1.0, -1.0);
    return out;
  }
  // d = 2: trapezoid in theta (periodic, spectrally accurate) of int_1^{R(theta)} K(r) r dr.
  const auto& s = std::get<StarSet>(E);
  if (!s.contains({0.0, 0.0})) throw InvalidSetError("inner_K needs a set star-shaped about the origin");
  const int M = std::max(256, 16 * (s.modes() + 1));
  std::vector<double> gx, gw;
  gauss_legendre(12, gx, gw);
  std::vector<double> part(M), perr(M);
  parallel_for(static_cast<std::size_t>(M), [&](std::size_t j) {
    const double t = kTwoPi * j / M;
    const double R = s.radial_about({0.0, 0.0}, t);
    auto radial = [&](double a, double b, int halves) {
      double v = 0.0;
      const double h = (b - a) / halves;
      for (int p = 0; p < halves; ++p) {
        const double c = a + (p + 0.5) * h;
        for (std::size_t i = 0; i < gx.size(); ++i) {
          const double r = c + 0.5 * h * gx[i];
          v += 0.5 * h * gw[i] * K(r) * r;
        }
      }
      return v;
    };
    const double v1 = radial(1.0, R, 1), v2 = radial(1.0, R, 2);
    part[j] = v2;
    perr[j] = std::abs(v2 - v1);
  });
  for (int j = 0; j < M; ++j) {
    out.value += part[j] * kTwoPi / M;
    out.error_estimate += perr[j] * kTwoPi / M;
  }
  return out;
}

QuadraticTerms quadratic_terms(const SetModel& E, double q, const QuadratureConfig& cfg) {
  check_expansion_q(dimension(E), q);
  if (dimension(E) == 1 && q < 3.0) throw ThresholdError("quadratic terms need q >= 3 in d = 1", 3.0);
  const FrequencyTerms t = frequency_terms(E, q, unit_symdiff(E), cfg);
  QuadraticTerms r;
  const double c1 = 0.25 * q * q, c2 = 0.25 * q * (q - 2.0);
  r.LL = t.fi.value[3] / c1;
  r.error_LL = t.fi.error[3] / c1;
  r.Lrefl = t.fi.value[4] / c2;
  r.error_Lrefl = t.fi.error[4] / c2;
  return r;
}

ExpansionReport expansion_report(const SetModel& E, double q, const QuadratureConfig& cfg) {
  cfg.validate();
  const int d = dimension(E);
  check_expansion_q(d, q);
  ExpansionReport rep;
  rep.q = q;
  rep.d = d;
  rep.symdiff = unit_symdiff(E);
  if (rep.symdiff > 0.3 * ball_volume(d))
    throw DomainError("expansion_report: |E delta B| exceeds 0.3 |B|, outside the expansion regime");
  const FrequencyTerms t = frequency_terms(E, q, rep.symdiff, cfg);
  const FrequencyIntegral& fi = t.fi;
  rep.direct = fi.value[0];
  rep.direct_error = fi.error[0];
  rep.base = fi.value[1];
  rep.term_K = fi.value[2];
  rep.term_LL = fi.value[3];
  rep.term_Lrefl = fi.value[4];
  rep.residual = fi.value[5];
  rep.residual_error = fi.error[5];
  if (q == 3.0) {
    rep.remainder = RemainderOrder::two;
  } else if (t.first_order) {
    rep.remainder = RemainderOrder::q_minus_one;
  }
  const double m = measure(E);
  const double phi = std::pow(rep.direct, 1.0 / q) / std::pow(m, 1.0 - 1.0 / q);
  babenko_guard(phi, phi * rep.direct_error / (q * rep.direct), q, d);
  return rep;
}

SetFamily named_family(const std::string& name, int d) {
  if (d == 1) {
    if (name == "sliver")
      return [](double e) { return SetModel(IntervalSet({{-1.0, 1.0 - e}, {1.0, 1.0 + e}})); };
    if (name == "translate") return [](double e) { return SetModel(IntervalSet({{-1.0 + e, 1.0 + e}})); };
  } else if (d == 2) {
    if (name == "translate") return [](double e) { return SetModel(StarSet({e, 0.0}, 1.0, {}, {})); };
    if (name.rfind("mode:", 0) == 0) {
      const int k = std::atoi(name.c_str() + 5);
      if (k < 1 || k > 64) throw DomainError("mode family needs 1 <= k <= 64");
      return [k](double e) {
        const double s = 1.0 / std::sqrt(1.0 + 0.5 * e * e);
        std::vector<double> a(k, 0.0), b(k, 0.0);
        a[k - 1] = s * e;
        return SetModel(StarSet({0.0, 0.0}, s, a, b));
      };
    }
    if (name.rfind("corona:", 0) == 0) {
      const auto seed = std::strtoull(name.c_str() + 7, nullptr, 10);
      Rng rng(seed);
      std::vector<double> a(6, 0.0), b(6, 0.0);
      double norm = 0.0;
      for (int n = 3; n <= 6; ++n) {
        a[n - 1] = rng.uniform(-1.0, 1.0);
        b[n - 1] = rng.uniform(-1.0, 1.0);
        norm += a[n - 1] * a[n - 1] + b[n - 1] * b[n - 1];
      }
      norm = std::sqrt(norm);
      return [a, b, norm](double e) {
        if (e == 0.0) return unit_ball(2);
        std::vector<double> ae(a), be(b);
        double extra = 0.0;
        for (std::size_t i = 0; i < ae.size(); ++i) {
          ae[i] *= e / norm;
          be[i] *= e / norm;
          extra += 0.5 * (ae[i] * ae[i] + be[i] * be[i]);
        }
        const double s = 1.0 / std::sqrt(1.0 + extra);
        for (std::size_t i = 0; i < ae.size(); ++i) {
          ae[i] *= s;
          be[i] *= s;
        }
        return balance(SetModel(StarSet({0.0, 0.0}, s, ae, be))).balanced;
      };
    }
  }
  throw DomainError("unknown family '" + name + "' for d = " + std::to_string(d));
}

SlopeResult remainder_slope(const SetFamily& family, double q, const std::vector<double>& eps_list,
                            const QuadratureConfig& cfg) {
  if (eps_list.size() < 4) throw DomainError("remainder_slope needs at least 4 epsilon values");
  for (std::size_t i = 0; i < eps_list.size(); ++i) {
    if (!(eps_list[i] > 0.0)) throw DomainError("epsilon values must be positive");
    if (i > 0 && !(eps_list[i] < eps_list[i - 1])) throw DomainError("epsilon values must be decreasing");
  }
  // The acceptance list 0.08 .. 0.01 spans a factor 8, so that is the required spread.
  if (eps_list.front() < 7.999 * eps_list.back()) throw DomainError("epsilon values must span a factor of 8");
  SlopeResult out;
  out.eps = eps_list;
  out.reports.resize(eps_list.size());
  parallel_for(eps_list.size(), [&](std::size_t i) { out.reports[i] = expansion_report(family(eps_list[i]), q, cfg); });
  double lo = 1e300, hi = 0.0;
  for (const auto& r : out.reports) {
    out.residual.push_back(r.residual);
    out.residual_error.push_back(r.residual_error);
    if (!(std::abs(r.residual) > 2.0 * r.residual_error)) out.noise_limited = true;
    lo = std::min(lo, std::abs(r.residual));
    hi = std::max(hi, std::abs(r.residual));
  }
  if (hi - lo <= 1e-12 * hi || hi == 0.0) out.noise_limited = true;
  if (lo == 0.0) {
    out.slope = std::numeric_limits<double>::quiet_NaN();
    return out;
  }
  const std::size_t n = eps_list.size();
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += std::log(eps_list[i]) / n;
    my += std::log(std::abs(out.residual[i])) / n;
  }
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = std::log(eps_list[i]) - mx;
    sxy += dx * (std::log(std::abs(out.residual[i])) - my);
    sxx += dx * dx;
  }
  out.slope = sxy / sxx;
  return out;
}

}  // namespace felab
