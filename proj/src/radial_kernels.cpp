#include "felab/radial_kernels.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

#include "felab/bessel_product.hpp"
#include "felab/errors.hpp"
#include "felab/io.hpp"
#include "felab/parallel.hpp"

namespace felab {

double continuity_threshold(int d) { return 4.0 - 2.0 / (d + 1.0); }

double k_threshold(int d) { return 3.0 - 2.0 / (d + 1.0); }

void require_above_threshold(KernelKind kind, int d, double q) {
  if (d < 1) throw DomainError("dimension must be positive");
  if (!std::isfinite(q)) throw DomainError("exponent q must be finite");
  const double t = kind == KernelKind::L ? continuity_threshold(d) : k_threshold(d);
  if (!(q > t)) {
    std::ostringstream os;
    os << "q=" << q << " is at or below the continuity threshold "
       << (kind == KernelKind::L ? "q_d=4-2/(d+1)=" : "3-2/(d+1)=") << std::lround((d + 1) * t) << "/" << (d + 1)
       << " (" << fmt17(t) << ") for " << (kind == KernelKind::L ? "L" : "K") << "-kind kernels in d=" << d;
    throw ThresholdError(os.str(), t);
  }
}

double ball_hat(int d, double r) {
  if (d < 1 || d > 3) throw CapabilityError("ball_hat supports d in {1, 2, 3}");
  if (!(r >= 0.0) || !std::isfinite(r)) throw DomainError("ball_hat: radius must be finite and nonnegative");
  return std::pow(2.0 * kPi, 0.5 * d) * bessel_j_scaled(0.5 * d, 2.0 * kPi * r);
}

namespace {

// g(rho) rho^extra as a Bessel product: |Bhat|^{q-2} (L) or Bhat|Bhat|^{q-2} (K).
BesselProduct spectral_weight(KernelKind kind, int d, double q) {
  const double s = kind == KernelKind::L ? q - 2.0 : q - 1.0;
  BesselProduct p;
  p.rho_power = -s * 0.5 * d;
  p.factors.push_back({0.5 * d, 2.0 * kPi, s, kind == KernelKind::K});
  return p;
}

}  // namespace

IntegralResult kernel_value(KernelKind kind, int d, double q, double r, const QuadratureConfig& cfg) {
  require_above_threshold(kind, d, q);
  if (!(r >= 0.0)) throw DomainError("kernel radius must be nonnegative");
  BesselProduct p = spectral_weight(kind, d, q);
  if (r == 0.0) {
    p.prefactor = sphere_area(d);
    p.rho_power += d - 1.0;
  } else {
    p.prefactor = 2.0 * kPi * std::pow(r, 1.0 - 0.5 * d);
    p.rho_power += 0.5 * d;
    p.factors.push_back({0.5 * d - 1.0, 2.0 * kPi * r, 1.0, true});
  }
  return integrate_bessel_product(p, cfg);
}

IntegralResult kernel_k_derivative(int d, double q, double r, const QuadratureConfig& cfg) {
  require_above_threshold(KernelKind::K, d, q);
  if (!(r > 0.0)) throw DomainError("kernel derivative requires r > 0");
  BesselProduct p = spectral_weight(KernelKind::K, d, q);
  p.prefactor = -4.0 * kPi * kPi * std::pow(r, 1.0 - 0.5 * d);
  p.rho_power += 0.5 * d + 1.0;
  p.factors.push_back({0.5 * d, 2.0 * kPi * r, 1.0, true});
  return integrate_bessel_product(p, cfg);
}

RadialKernel::RadialKernel(KernelKind kind, int d, double q, std::vector<double> radii, std::vector<double> values,
                           std::vector<double> errors)
    : kind_(kind), d_(d), q_(q), radii_(std::move(radii)), values_(std::move(values)), errors_(std::move(errors)) {}

double RadialKernel::max_error() const {
  double m = 0.0;
  for (double e : errors_) m = std::max(m, e);
  return m;
}

double RadialKernel::operator()(double r) const {
  const std::size_t n = radii_.size();
  if (n == 0) throw DomainError("empty kernel profile");
  if (!(r >= 0.0) || r > r_max() * (1.0 + 1e-14)) throw DomainError("radius outside the sampled profile range");
  if (n < 4) return values_[std::min(n - 1, static_cast<std::size_t>(std::lround(r / r_max() * (n - 1))))];
  const double h = radii_[1] - radii_[0];
  const double t = r / h;
  long i0 = static_cast<long>(std::floor(t)) - 1;
  i0 = std::clamp<long>(i0, 0, static_cast<long>(n) - 4);
  double v = 0.0;
  for (int j = 0; j < 4; ++j) {
    double w = 1.0;
    for (int k = 0; k < 4; ++k)
      if (k != j) w *= (t - (i0 + k)) / static_cast<double>(j - k);
    v += w * values_[i0 + j];
  }
  return v;
}

RadialKernel kernel_profile(KernelKind kind, int d, double q, double r_max, int n_samples,
                            const QuadratureConfig& cfg) {
  require_above_threshold(kind, d, q);
  if (n_samples < 2) throw DomainError("kernel_profile needs at least two samples");
  if (!(r_max > 0.0)) throw DomainError("kernel_profile needs r_max > 0");
  std::vector<double> radii(n_samples), values(n_samples), errors(n_samples);
  for (int i = 0; i < n_samples; ++i) radii[i] = r_max * i / (n_samples - 1);
  parallel_for(n_samples, [&](std::size_t i) {
    const IntegralResult r = kernel_value(kind, d, q, radii[i], cfg);
    values[i] = r.value;
    errors[i] = r.error_estimate;
  });
  return RadialKernel(kind, d, q, std::move(radii), std::move(values), std::move(errors));
}

RadialKernel kernel_profile(KernelKind kind, int d, double q, const QuadratureConfig& cfg) {
  return kernel_profile(kind, d, q, std::max(q, 4.0), 2048, cfg);
}

IntegralResult gamma_spectral(int d, double q, const QuadratureConfig& cfg) {
  IntegralResult r = kernel_k_derivative(d, q, 1.0, cfg);
  r.value = -r.value;
  return r;
}

IntegralResult gamma_closed_form_1d(double q, const QuadratureConfig& cfg) {
  // 4 pi^{2-q} int_0^inf xi^{2-q} |sin(2 pi xi)|^q dxi: segments between the zeros k/2 up
  // to N, then the tail from the cosine series |sin(2 pi xi)|^q = sum_m C_m (-1)^m cos(4 pi m xi)
  // with int_N^inf xi^{-s} e^{i w xi} = N^{1-s} E_s(-i w N).
  require_above_threshold(KernelKind::L, 1, q);
  const double s = q - 2.0;
  const int segments = 40;
  const double N = 0.5 * segments;
  QuadratureConfig c = cfg;
  c.abs_tol = std::min(cfg.abs_tol, 1e-14) / segments;
  c.rel_tol = std::min(cfg.rel_tol, 1e-13);
  IntegralResult head;
  for (int k = 0; k < segments; ++k) {
    const IntegralResult r = integrate_adaptive(
        [s, q](double xi) { return xi == 0.0 ? 0.0 : std::pow(xi, -s) * std::pow(std::abs(std::sin(2.0 * kPi * xi)), q); },
        0.5 * k, 0.5 * (k + 1), c);
    head.value += r.value;
    head.error_estimate += r.error_estimate;
    head.converged = head.converged && r.converged;
  }
  const double lead = std::pow(N, 1.0 - s);
  double tail = abs_cos_power_coefficient(q, false, 0) * lead / (s - 1.0);
  const int harmonics = 512;
  double cm = abs_cos_power_coefficient(q, false, 1), last = 0.0;
  for (int m = 1; m <= harmonics && cm != 0.0; ++m) {
    if (m > 1) cm *= (0.5 * q - m + 1.0) / (0.5 * q + m);  // vanishes past q/2 for even q
    last = cm * lead * expint_p(s, {0.0, -4.0 * kPi * m * N}).real();
    tail += (m % 2 ? -1.0 : 1.0) * last;
  }
  if (cm == 0.0) last = 0.0;
  const double scale = 4.0 * std::pow(kPi, 2.0 - q);
  IntegralResult r;
  r.value = scale * (head.value + tail);
  r.error_estimate = scale * (head.error_estimate + harmonics * std::abs(last) + 1e-15 * std::abs(tail));
  r.converged = head.converged && r.error_estimate <= cfg.target(r.value);
  return r;
}

IntegralResult gamma_qd(int d, double q, const QuadratureConfig& cfg) {
  if (!(q > continuity_threshold(d))) require_above_threshold(KernelKind::L, d, q);
  if (d == 1) return gamma_closed_form_1d(q, cfg);
  return gamma_spectral(d, q, cfg);
}

std::vector<double> cell_centered_grid(double a, double b, int n) {
  std::vector<double> g(n);
  for (int i = 0; i < n; ++i) g[i] = a + (b - a) * (i + 0.5) / n;
  return g;
}

FirstVariationResult first_variation_check(int d, double q, const std::vector<double>& inner_grid,
                                           const std::vector<double>& outer_grid, const QuadratureConfig& cfg) {
  if (inner_grid.empty() || outer_grid.empty()) throw DomainError("first_variation_check: empty grid");
  std::vector<double> radii(inner_grid);
  radii.insert(radii.end(), outer_grid.begin(), outer_grid.end());
  std::vector<IntegralResult> vals(radii.size());
  parallel_for(radii.size(), [&](std::size_t i) { vals[i] = kernel_value(KernelKind::K, d, q, radii[i], cfg); });
  FirstVariationResult res;
  res.inner_min = vals[0].value;
  res.outer_max = vals[inner_grid.size()].value;
  double e_in = vals[0].error_estimate, e_out = vals[inner_grid.size()].error_estimate;
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (i < inner_grid.size()) {
      if (vals[i].value < res.inner_min) {
        res.inner_min = vals[i].value;
        e_in = vals[i].error_estimate;
      }
    } else if (vals[i].value > res.outer_max) {
      res.outer_max = vals[i].value;
      e_out = vals[i].error_estimate;
    }
  }
  res.error_bound = e_in + e_out;
  res.margin = res.inner_min - res.outer_max;
  res.satisfied = res.inner_min >= res.outer_max - res.error_bound;
  return res;
}

double rho_d(int d) {
  if (d < 1) throw DomainError("rho_d requires d >= 1");
  QuadratureConfig cfg;
  cfg.abs_tol = 1e-15;
  cfg.rel_tol = 1e-14;
  const double e = 0.5 * (d - 1);
  const IntegralResult m =
      integrate_adaptive([e](double s) { return s * s * std::pow(std::max(0.0, 1.0 - s * s), e); }, -1.0, 1.0, cfg);
  return 2.0 * kPi * ball_volume(d - 1) / ball_volume(d) * m.value;
}

AsymptoticFit gamma_asymptotic_fit(int d, const std::vector<double>& q_list, const QuadratureConfig& cfg) {
  if (q_list.size() < 4) throw ArityError("gamma_asymptotic_fit needs at least four exponents");
  const std::size_t n = q_list.size();
  std::vector<double> y(n);
  parallel_for(n, [&](std::size_t i) {
    y[i] = std::log(gamma_qd(d, q_list[i], cfg).value) - q_list[i] * std::log(ball_volume(d));
  });
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = std::log(q_list[i]);
    sx += x;
    sy += y[i];
    sxx += x * x;
    sxy += x * y[i];
  }
  AsymptoticFit fit;
  fit.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  fit.kappa_estimate = std::exp((sy - fit.slope * sx) / n);
  return fit;
}

void write_profile_csv(std::ostream& os, const RadialKernel& k) {
  os << "radius,value,error\n";
  for (std::size_t i = 0; i < k.radii().size(); ++i)
    os << fmt17(k.radii()[i]) << ',' << fmt17(k.values()[i]) << ',' << fmt17(k.errors()[i]) << '\n';
}

}  // namespace felab
