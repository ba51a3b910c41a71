#include "felab/functional.hpp"

#include <fftw3.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <memory>
#include <mutex>
#include <stdexcept>

#include "felab/errors.hpp"
#include "felab/piecewise_poly.hpp"

namespace felab {

namespace {

constexpr double kTwoPi = 2.0 * kPi;

// int_0^1 e^{-its} s ds
std::complex<double> disc_ray(double t) {
  if (std::abs(t) < 0.5) {
    // sum_k (-it)^k / (k! (k + 2))
    std::complex<double> term = 1.0, s = 0.5;
    const std::complex<double> mit(0.0, -t);
    for (int k = 1; k <= 16; ++k) {
      term *= mit / static_cast<double>(k);
      s += term / static_cast<double>(k + 2);
    }
    return s;
  }
  const std::complex<double> e(std::cos(t), -std::sin(t));
  return (e * std::complex<double>(1.0, t) - 1.0) / (t * t);
}

// Fourier transform of a star set through the angular trapezoid rule, with the
// node count tied to the phase bandwidth 2 pi |eta| (r_max + max |r'|).
class StarHat {
public:
  explicit StarHat(const StarSet& s) : s_(s) {
    const int M = std::max(256, 64 * (s.modes() + 1));
    double rmax = 0.0, dmax = 0.0;
    for (int j = 0; j < M; ++j) {
      const double t = kTwoPi * j / M;
      rmax = std::max(rmax, s.radius(t));
      dmax = std::max(dmax, std::abs(s.radius_derivative(t)));
    }
    span_ = rmax + dmax;
    det_ = s.affine().det();
  }

  std::complex<double> operator()(const std::array<double, 2>& xi) const {
    const auto& A = s_.affine().A;
    const double e0 = A[0] * xi[0] + A[2] * xi[1], e1 = A[1] * xi[0] + A[3] * xi[1];
    const auto& nodes = table(std::hypot(e0, e1));
    std::complex<double> sum = 0.0;
    for (const auto& n : nodes) {
      const double t = kTwoPi * n[2] * (e0 * n[0] + e1 * n[1]);
      sum += n[3] * disc_ray(t);
    }
    const auto& c = s_.center();
    const auto& v = s_.affine().v;
    const double phase = -kTwoPi * (c[0] * e0 + c[1] * e1 + v[0] * xi[0] + v[1] * xi[1]);
    return det_ * std::complex<double>(std::cos(phase), std::sin(phase)) * sum;
  }

private:
  // Nodes (cos, sin, r, weight * r^2) for a trapezoid of 64 k points.
  const std::vector<std::array<double, 4>>& table(double eta) const {
    const double B = kTwoPi * eta * span_;
    const double need = B + 10.0 * std::cbrt(B) + 4.0 * (s_.modes() + 1) + 24.0;
    const std::size_t k = static_cast<std::size_t>(std::ceil(need / 64.0));
    std::lock_guard<std::mutex> lock(mu_);
    if (cache_.size() <= k) cache_.resize(k + 1);
    auto& tab = cache_[k];
    if (tab.empty()) {
      const int n = static_cast<int>(64 * k);
      tab.resize(n);
      for (int j = 0; j < n; ++j) {
        const double th = kTwoPi * j / n;
        const double r = s_.radius(th);
        tab[j] = {std::cos(th), std::sin(th), r, kTwoPi / n * r * r};
      }
    }
    return tab;
  }

  const StarSet& s_;
  double span_ = 1.0, det_ = 1.0;
  mutable std::mutex mu_;
  mutable std::vector<std::vector<std::array<double, 4>>> cache_;
};

std::complex<double> interval_hat(const IntervalSet& E, double xi) {
  std::complex<double> s = 0.0;
  for (const auto& [l, r] : E.intervals()) {
    const double w = r - l, c = 0.5 * (l + r);
    const double sinc = xi == 0.0 ? w : std::sin(kPi * xi * w) / (kPi * xi);
    s += sinc * std::complex<double>(std::cos(kTwoPi * xi * c), -std::sin(kTwoPi * xi * c));
  }
  return s;
}

std::atomic<long> g_evaluations{0}, g_violations{0};
std::mutex g_worst_mu;
double g_worst = 0.0;

}  // namespace

double set_diameter(const SetModel& E) {
  if (const auto* iv = std::get_if<IntervalSet>(&E)) return iv->max() - iv->min();
  const auto& s = std::get<StarSet>(E);
  const int M = std::max(256, 64 * (s.modes() + 1));
  double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
  for (int j = 0; j < M; ++j) {
    const double t = kTwoPi * j / M, r = s.radius(t);
    const auto p = s.affine().apply({s.center()[0] + r * std::cos(t), s.center()[1] + r * std::sin(t)});
    x0 = std::min(x0, p[0]);
    x1 = std::max(x1, p[0]);
    y0 = std::min(y0, p[1]);
    y1 = std::max(y1, p[1]);
  }
  return std::hypot(x1 - x0, y1 - y0);
}

std::string to_string(PhiMethod m) {
  switch (m) {
    case PhiMethod::closed_form_1d: return "closed_form_1d";
    case PhiMethod::polar_quadrature_2d: return "polar_quadrature_2d";
    case PhiMethod::grid_fft: return "grid_fft";
    case PhiMethod::convolution_oracle: return "convolution_oracle";
  }
  return "unknown";
}

std::complex<double> indicator_hat(const SetModel& E, const std::array<double, 2>& xi) {
  if (const auto* iv = std::get_if<IntervalSet>(&E)) return interval_hat(*iv, xi[0]);
  return StarHat(std::get<StarSet>(E))(xi);
}

std::complex<double> indicator_hat(const SetModel& E, double xi) {
  if (dimension(E) != 1) throw DomainError("scalar frequency given for a planar set");
  return interval_hat(std::get<IntervalSet>(E), xi);
}

double babenko_constant(double q, int d) {
  if (!(q > 1.0)) throw DomainError("Babenko constant requires q > 1");
  const double p = q / (q - 1.0);
  return std::pow(std::pow(p, 0.5 / p) * std::pow(q, -0.5 / q), d);
}

BabenkoStats babenko_stats() {
  BabenkoStats s;
  s.evaluations = g_evaluations.load();
  s.violations = g_violations.load();
  std::lock_guard<std::mutex> lock(g_worst_mu);
  s.worst_ratio = g_worst;
  return s;
}

void reset_babenko_stats() {
  g_evaluations = 0;
  g_violations = 0;
  std::lock_guard<std::mutex> lock(g_worst_mu);
  g_worst = 0.0;
}

void babenko_guard(double phi, double err_phi, double q, int d) {
  const double C = babenko_constant(q, d);
  ++g_evaluations;
  if (!(phi - err_phi < C)) ++g_violations;
  std::lock_guard<std::mutex> lock(g_worst_mu);
  g_worst = std::max(g_worst, phi / C);
}

double default_cutoff(const SetModel& E, double q) {
  if (dimension(E) == 2) return 16.0;
  if (q >= 4.0) return 256.0;
  return 256.0 * std::pow(2.0, std::ceil(2.0 * (4.0 - q)));
}

FrequencyIntegral integrate_frequency(const SetModel& E, const FreqFn& g, const FrequencyOptions& opt) {
  const int d = dimension(E);
  const double R = opt.cutoff > 0.0 ? opt.cutoff : default_cutoff(E, 4.0);
  const double width = opt.panel_width > 0.0 ? opt.panel_width : 1.0 / std::max(1.0, set_diameter(E));
  std::function<FreqVec(double)> f;
  bool angular_ok = true;
  std::unique_ptr<StarHat> hat2;
  if (d == 1) {
    const auto& iv = std::get<IntervalSet>(E);
    f = [&](double xi) {
      FreqVec v = g(xi, interval_hat(iv, xi));
      for (double& x : v) x *= 2.0;
      return v;
    };
  } else {
    const auto& s = std::get<StarSet>(E);
    hat2 = std::make_unique<StarHat>(s);
    int m0 = 16;
    while (m0 < 4 * s.modes() + 8) m0 *= 2;
    f = [&, m0](double rho) {
      // 2 int_0^pi g dphi by nested trapezoid doubling.
      FreqVec sum{}, prev{};
      auto add = [&](int M, int start, int stride) {
        for (int j = start; j < M; j += stride) {
          const double ph = kPi * j / M;
          const FreqVec v = g(rho, (*hat2)({rho * std::cos(ph), rho * std::sin(ph)}));
          for (std::size_t i = 0; i < kFreqComponents; ++i) sum[i] += v[i];
        }
      };
      int M = m0;
      add(M, 0, 1);
      for (std::size_t i = 0; i < kFreqComponents; ++i) prev[i] = sum[i] * kPi / M;
      for (;;) {
        add(2 * M, 1, 2);
        M *= 2;
        bool ok = true;
        FreqVec cur{};
        for (std::size_t i = 0; i < kFreqComponents; ++i) {
          cur[i] = sum[i] * kPi / M;
          const double tol = std::max(0.01 * opt.rel_tol * std::abs(cur[i]),
                                      opt.abs_tol[i] / (100.0 * R * std::max(1.0, rho)));
          if (std::abs(cur[i] - prev[i]) > tol) ok = false;
        }
        prev = cur;
        if (ok) break;
        if (M >= 16384) {
          angular_ok = false;
          break;
        }
      }
      FreqVec v;
      for (std::size_t i = 0; i < kFreqComponents; ++i) v[i] = 2.0 * rho * prev[i];
      return v;
    };
  }

  const double cuts[4] = {0.0, 0.25 * R, 0.5 * R, R};
  FreqVec part[3], perr[3];
  bool ok = true;
  for (int k = 0; k < 3; ++k) {
    const int n = std::max(1, static_cast<int>(std::ceil((cuts[k + 1] - cuts[k]) / width)));
    std::vector<double> bp(n + 1);
    for (int i = 0; i <= n; ++i) bp[i] = cuts[k] + (cuts[k + 1] - cuts[k]) * i / n;
    FreqVec tol;
    for (std::size_t i = 0; i < kFreqComponents; ++i) tol[i] = opt.abs_tol[i] / 3.0;
    ok &= integrate_panels_vec<kFreqComponents>(f, bp, tol, opt.rel_tol, opt.max_subdivisions, part[k], perr[k]);
  }

  FrequencyIntegral out;
  out.cutoff = R;
  for (std::size_t i = 0; i < kFreqComponents; ++i) {
    const double S1 = part[1][i], S2 = part[2][i];
    double tail = 0.0, terr = 0.0;
    const bool geometric = S1 != 0.0 && S2 / S1 > 0.0 && S2 / S1 < 1.0;
    const double tail_g = geometric ? S2 * (S2 / S1) / (1.0 - S2 / S1) : 0.0;
    if (opt.tail_exponent[i] > 1.0) {
      const double r = std::pow(2.0, 1.0 - opt.tail_exponent[i]);
      tail = S2 * r / (1.0 - r);
      terr = opt.shell_bounded_tail[i] ? std::abs(S2)
                                       : (geometric ? std::abs(tail - tail_g) : std::abs(tail)) + 1e-3 * std::abs(tail);
    } else if (geometric) {
      tail = tail_g;
      terr = 0.25 * std::abs(tail_g);
    } else {
      terr = std::abs(S2);
    }
    out.value[i] = part[0][i] + S1 + S2 + tail;
    out.error[i] = perr[0][i] + perr[1][i] + perr[2][i] + terr;
  }
  out.converged = ok && angular_ok;
  return out;
}

PhiResult phi_q(const SetModel& E, double q, const QuadratureConfig& cfg) {
  if (!std::isfinite(q) || !(q > 2.0)) throw DomainError("phi_q requires a finite exponent q > 2");
  cfg.validate();
  const int d = dimension(E);
  const double m = measure(E);
  FrequencyOptions o;
  o.cutoff = cfg.frequency_cutoff > 0.0 ? cfg.frequency_cutoff : default_cutoff(E, q);
  o.abs_tol[0] = cfg.abs_tol;
  o.rel_tol = cfg.rel_tol;
  o.max_subdivisions = cfg.max_subdivisions;
  o.tail_exponent[0] = d == 1 ? q : 1.5 * q - 1.0;
  const double diam = set_diameter(E);
  o.panel_width = d == 1 ? 0.5 / std::max(1.0, 0.5 * q * diam) : 1.0 / std::max(1.0, 0.25 * q * diam);
  const FrequencyIntegral fi = integrate_frequency(
      E, [q](double, std::complex<double> h) { return FreqVec{std::pow(std::abs(h), q), 0, 0, 0, 0, 0}; }, o);
  PhiResult r;
  r.norm_q_pow_q = fi.value[0];
  r.error_estimate = fi.error[0];
  r.measure = m;
  r.method = d == 1 ? PhiMethod::closed_form_1d : PhiMethod::polar_quadrature_2d;
  r.phi = std::pow(r.norm_q_pow_q, 1.0 / q) / std::pow(m, 1.0 - 1.0 / q);
  r.converged = fi.converged && r.error_estimate <= cfg.target(r.norm_q_pow_q);
  babenko_guard(r.phi, r.phi * r.error_estimate / (q * r.norm_q_pow_q), q, d);
  return r;
}

PhiResult phi_grid_fft(const SetModel& E, double q, int resolution) {
  if (!std::isfinite(q) || !(q > 2.0)) throw DomainError("phi_grid_fft requires a finite exponent q > 2");
  if (resolution < 16) throw DomainError("grid resolution must be at least 16");
  const int d = dimension(E);
  const double diam = set_diameter(E);
  const double side = 4.0 * diam;
  auto run = [&](int n) {
    double cx = 0.0, cy = 0.0;
    if (const auto* iv = std::get_if<IntervalSet>(&E)) {
      cx = 0.5 * (iv->min() + iv->max());
    } else {
      const auto p = std::get<StarSet>(E).star_point();
      cx = p[0];
      cy = p[1];
    }
    const double h = side / n;
    const std::size_t total = d == 1 ? static_cast<std::size_t>(n) : static_cast<std::size_t>(n) * n;
    fftw_complex* buf = fftw_alloc_complex(total);
    for (std::size_t k = 0; k < total; ++k) buf[k][0] = buf[k][1] = 0.0;
    if (d == 1) {
      const auto& iv = std::get<IntervalSet>(E);
      for (int i = 0; i < n; ++i) {
        const double x = cx - 0.5 * side + (i + 0.5) * h;
        buf[i][0] = iv.coverage(x - 0.5 * h, x + 0.5 * h) / h;
      }
    } else {
      const auto& s = std::get<StarSet>(E);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          const std::array<double, 2> x{cx - 0.5 * side + (i + 0.5) * h, cy - 0.5 * side + (j + 0.5) * h};
          buf[static_cast<std::size_t>(i) * n + j][0] = s.contains(x) ? 1.0 : 0.0;
        }
    }
    fftw_plan plan = d == 1 ? fftw_plan_dft_1d(n, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE)
                            : fftw_plan_dft_2d(n, n, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
    fftw_execute(plan);
    const double cell = std::pow(h, d), dxi = std::pow(1.0 / side, d);
    double s = 0.0;
    for (std::size_t k = 0; k < total; ++k) s += std::pow(cell * std::hypot(buf[k][0], buf[k][1]), q);
    fftw_destroy_plan(plan);
    fftw_free(buf);
    return s * dxi;
  };
  PhiResult r;
  r.norm_q_pow_q = run(resolution);
  r.error_estimate = std::abs(r.norm_q_pow_q - run(resolution / 2));
  r.measure = measure(E);
  r.method = PhiMethod::grid_fft;
  r.phi = std::pow(r.norm_q_pow_q, 1.0 / q) / std::pow(r.measure, 1.0 - 1.0 / q);
  r.converged = false;  // discretization error is only estimated
  babenko_guard(r.phi, r.phi * r.error_estimate / (q * r.norm_q_pow_q), q, d);
  return r;
}

PhiResult phi_even_oracle(const SetModel& E, int q, int grid_resolution) {
  if (q < 4 || q % 2 != 0) throw DomainError("phi_even_oracle requires an even integer q >= 4");
  if (dimension(E) == 2) {
    PhiResult r = phi_grid_fft(E, q, grid_resolution);
    r.method = PhiMethod::convolution_oracle;
    return r;
  }
  const auto& iv = std::get<IntervalSet>(E);
  const PiecewisePoly G = PiecewisePoly::convolution_power(iv, q / 2);
  PhiResult r;
  r.norm_q_pow_q = G.square_integral();
  r.error_estimate = 1e-14 * r.norm_q_pow_q;
  r.measure = iv.measure();
  r.method = PhiMethod::convolution_oracle;
  r.phi = std::pow(r.norm_q_pow_q, 1.0 / q) / std::pow(r.measure, 1.0 - 1.0 / q);
  babenko_guard(r.phi, 0.0, q, 1);
  return r;
}

double q_continuity_probe(const SetModel& E, double q, double r, const QuadratureConfig& cfg) {
  if (q == r) throw DomainError("q_continuity_probe requires q != r");
  const SetModel E1 = normalize_measure(E, 1.0);
  const double nq = std::pow(phi_q(E1, q, cfg).norm_q_pow_q, 1.0 / q);
  const double nr = std::pow(phi_q(E1, r, cfg).norm_q_pow_q, 1.0 / r);
  return std::abs(nq - nr) / std::sqrt(std::abs(q - r));
}

}  // namespace felab
