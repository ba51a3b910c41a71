#include "felab/spectral.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <tuple>

#include "felab/bessel_product.hpp"
#include "felab/errors.hpp"
#include "felab/parallel.hpp"
#include "felab/radial_kernels.hpp"

namespace felab {

namespace {

constexpr int kPanels = 64;
constexpr int kNodesPerPanel = 15;

bool even_integer(double q) { return q == std::round(q) && static_cast<long>(q) % 2 == 0; }

// Normalized zonal polynomial P_k(t) with P_k(1) = 1 on S^{d-1}.
double zonal(int d, int k, double t) {
  const double lambda = 0.5 * (d - 2);
  return gegenbauer(k, lambda, t) / gegenbauer(k, lambda, 1.0);
}

}  // namespace

AngleProfile::AngleProfile(int d, double q, const QuadratureConfig& cfg) : d_(d), q_(q) {
  if (d < 2) throw CapabilityError("angle profiles need d >= 2");
  require_above_threshold(KernelKind::L, d, q);
  // Uniform panels; the last one (r -> 2) is graded, and for non-even q the first one
  // as well, since L_q has a fractional-power cusp at the origin there.
  const double h = kPi / kPanels;
  std::vector<double> bp;
  if (even_integer(q)) {
    bp.push_back(0.0);
  } else {
    for (double f : {0.0, 1.0 / 16, 0.25}) bp.push_back(f * h);
  }
  for (int i = 1; i < kPanels; ++i) bp.push_back(i * h);
  for (double f : {0.25, 1.0 / 16, 0.0}) bp.push_back(kPi - f * h);
  const std::size_t np = bp.size() - 1;
  theta_.resize(np * kNodesPerPanel);
  wk_.resize(theta_.size());
  wg_.assign(theta_.size(), 0.0);
  for (std::size_t p = 0; p < np; ++p) {
    const double c = 0.5 * (bp[p] + bp[p + 1]), hw = 0.5 * (bp[p + 1] - bp[p]);
    std::size_t idx = p * kNodesPerPanel;
    for (int j = 0; j < 8; ++j) {
      const double x = detail::kGK15Nodes[j];
      const double wk = hw * detail::kGK15Weights[j];
      const double wg = j % 2 == 1 ? hw * detail::kG7Weights[j / 2] : 0.0;
      if (j == 7) {
        theta_[idx] = c;
        wk_[idx] = wk;
        wg_[idx++] = wg;
      } else {
        for (double s : {-1.0, 1.0}) {
          theta_[idx] = c + s * hw * x;
          wk_[idx] = wk;
          wg_[idx++] = wg;
        }
      }
    }
  }
  value_.resize(theta_.size());
  error_.resize(theta_.size());
  parallel_for(theta_.size(), [&](std::size_t i) {
    const IntegralResult r = kernel_value(KernelKind::L, d, q, 2.0 * std::sin(0.5 * theta_[i]), cfg);
    value_[i] = r.value;
    error_[i] = r.error_estimate;
  });
}

IntegralResult AngleProfile::weighted(const std::vector<double>& w) const {
  IntegralResult res;
  const std::size_t np = theta_.size() / kNodesPerPanel;
  for (std::size_t p = 0; p < np; ++p) {
    double k = 0.0, g = 0.0, e = 0.0;
    for (std::size_t i = p * kNodesPerPanel; i < (p + 1) * kNodesPerPanel; ++i) {
      k += wk_[i] * value_[i] * w[i];
      g += wg_[i] * value_[i] * w[i];
      e += wk_[i] * error_[i] * std::abs(w[i]);
    }
    res.value += k;
    // The Kronrod-Gauss difference grossly overstates the error of a resolved panel;
    // the usual (200 |K - G|)^{3/2} scaling is applied relative to the panel size.
    const double scale = std::max(std::abs(k), 1e-300);
    const double diff = std::abs(k - g);
    res.error_estimate += std::min(diff, scale * std::pow(200.0 * diff / scale, 1.5)) + e;
  }
  return res;
}

IntegralResult AngleProfile::circle_coeff(int n) const {
  if (d_ != 2) throw DomainError("circle_coeff is defined for d = 2");
  std::vector<double> w(theta_.size());
  for (std::size_t i = 0; i < theta_.size(); ++i) w[i] = std::cos(n * theta_[i]) / kPi;
  return weighted(w);
}

IntegralResult AngleProfile::eigenvalue(int k) const {
  if (k < 0) throw DomainError("eigenvalue degree must be nonnegative");
  std::vector<double> w(theta_.size());
  const double area = sphere_area(d_ - 1);
  for (std::size_t i = 0; i < theta_.size(); ++i) {
    const double t = theta_[i];
    w[i] = area * (d_ == 2 ? std::cos(k * t) : zonal(d_, k, std::cos(t)) * std::pow(std::sin(t), d_ - 2));
  }
  return weighted(w);
}

std::shared_ptr<const AngleProfile> angle_profile(int d, double q, const QuadratureConfig& cfg) {
  using Key = std::tuple<int, double, double, double>;
  static std::mutex mu;
  static std::map<Key, std::shared_ptr<const AngleProfile>> cache;
  const Key key{d, q, cfg.abs_tol, cfg.rel_tol};
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  auto p = std::make_shared<const AngleProfile>(d, q, cfg);
  std::lock_guard<std::mutex> lock(mu);
  return cache.emplace(key, p).first->second;
}

IntegralResult circle_coeff(double q, int n, const QuadratureConfig& cfg) {
  return angle_profile(2, q, cfg)->circle_coeff(n);
}

IntegralResult funk_hecke_eigenvalue(int d, double q, int k, const QuadratureConfig& cfg) {
  if (d < 2) throw CapabilityError("Funk-Hecke eigenvalues need d >= 2");
  if (k < 0) throw DomainError("eigenvalue degree must be nonnegative");
  require_above_threshold(KernelKind::L, d, q);
  QuadratureConfig inner = cfg;
  inner.abs_tol = 0.1 * cfg.abs_tol;
  inner.rel_tol = 0.1 * cfg.rel_tol;
  std::vector<double> bp(17);
  for (int i = 0; i <= 16; ++i) bp[i] = kPi * i / 16;
  double kernel_err = 0.0;
  std::mutex mu;
  IntegralResult r = integrate_adaptive(
      [&](double t) {
        const IntegralResult L = kernel_value(KernelKind::L, d, q, 2.0 * std::sin(0.5 * t), inner);
        const double w = d == 2 ? std::cos(k * t) : zonal(d, k, std::cos(t)) * std::pow(std::sin(t), d - 2);
        std::lock_guard<std::mutex> lock(mu);
        kernel_err = std::max(kernel_err, L.error_estimate);
        return L.value * w;
      },
      bp, cfg);
  const double area = sphere_area(d - 1);
  r.value *= area;
  r.error_estimate = area * (r.error_estimate + kPi * kernel_err);
  return r;
}

IntegralResult hankel_eigenvalue(int d, double q, int k, const QuadratureConfig& cfg) {
  if (d < 2) throw CapabilityError("Hankel eigenvalues need d >= 2");
  if (k < 0) throw DomainError("eigenvalue degree must be nonnegative");
  require_above_threshold(KernelKind::L, d, q);
  BesselProduct p;
  p.prefactor = 4.0 * kPi * kPi;
  p.rho_power = 1.0 - 0.5 * (q - 2.0) * d;
  p.factors.push_back({0.5 * d, 2.0 * kPi, q - 2.0, false});
  p.factors.push_back({k + 0.5 * d - 1.0, 2.0 * kPi, 2.0, false});
  return integrate_bessel_product(p, cfg);
}

double mode_weight(double q, int n) {
  return 0.25 * q * q + 0.25 * q * (q - 2.0) * (n % 2 == 0 ? 1.0 : -1.0);
}

ModeSpectrum mode_margins(int d, double q, int n_max, const QuadratureConfig& cfg) {
  if (n_max < 0) throw DomainError("n_max must be nonnegative");
  ModeSpectrum s;
  s.d = d;
  s.q = q;
  const IntegralResult g = gamma_qd(d, q, cfg);
  s.gamma = g.value;
  s.gamma_error = g.error_estimate;
  if (d == 1) {
    // S^0: eigenvalues L(0) +- L(2) on the even and odd functions.
    const IntegralResult L0 = kernel_value(KernelKind::L, 1, q, 0.0, cfg);
    const IntegralResult L2 = kernel_value(KernelKind::L, 1, q, 2.0, cfg);
    s.first_order = 0.5 * q * s.gamma;
    for (int k = 0; k <= std::min(n_max, 1); ++k) {
      ModeRecord m;
      m.n = k;
      m.ell_hat = L0.value + (k == 0 ? 1.0 : -1.0) * L2.value;
      m.combined = mode_weight(q, k) * m.ell_hat;
      m.margin = s.first_order - m.combined;
      m.error = mode_weight(q, k) * (L0.error_estimate + L2.error_estimate) + 0.5 * q * s.gamma_error;
      s.modes.push_back(m);
    }
    s.stability_constant = std::numeric_limits<double>::quiet_NaN();
  } else {
    auto prof = angle_profile(d, q, cfg);
    // With a b = 0 pointwise, int (a^2 + b^2) = int F^2, which is 2 pi sum |F^(n)|^2 in
    // the d = 2 exponential basis and sum ||F_k||^2 for orthogonal harmonics in d >= 3.
    const double norm = d == 2 ? 2.0 * kPi : 1.0;
    s.first_order = 0.5 * q * s.gamma * norm;
    s.modes.resize(n_max + 1);
    parallel_for(static_cast<std::size_t>(n_max + 1), [&](std::size_t n) {
      ModeRecord& m = s.modes[n];
      m.n = static_cast<int>(n);
      const IntegralResult e = d == 2 ? prof->circle_coeff(m.n) : prof->eigenvalue(m.n);
      m.ell_hat = e.value;
      const double scale = d == 2 ? 4.0 * kPi * kPi : 1.0;
      m.combined = scale * mode_weight(q, m.n) * e.value;
      m.margin = s.first_order - m.combined;
      m.error = scale * mode_weight(q, m.n) * e.error_estimate + 0.5 * q * norm * s.gamma_error;
    });
    s.stability_constant = std::numeric_limits<double>::quiet_NaN();
    for (const auto& m : s.modes) {
      if (m.n < 3) continue;
      if (s.worst_mode < 0 || m.margin < s.worst_margin) {
        s.worst_mode = m.n;
        s.worst_margin = m.margin;
      }
    }
    // Cauchy-Schwarz: int (a^2 + b^2) >= |E delta B|^2 / (2 sigma(S^{d-1})).
    if (s.worst_mode >= 0) s.stability_constant = s.worst_margin / (norm * 2.0 * sphere_area(d));
  }
  for (const auto& m : s.modes)
    if (std::abs(m.margin) <= 1e-8 * std::max(1.0, std::abs(s.first_order)) + m.error) s.neutral_modes.push_back(m.n);
  return s;
}

double sphere_reduced_prediction(const SphereProfile& profile, int d, double q, const QuadratureConfig& cfg) {
  if (profile.d != d) throw DomainError("profile dimension does not match d");
  const double gamma = gamma_qd(d, q, cfg).value;
  const double first = -0.5 * q * gamma * profile.ab_square_integral();
  if (d == 1) {
    const double L0 = kernel_value(KernelKind::L, 1, q, 0.0, cfg).value;
    const double L2 = kernel_value(KernelKind::L, 1, q, 2.0, cfg).value;
    const double Fp = profile.F_plus, Fm = profile.F_minus;
    const double QFF = L0 * (Fp * Fp + Fm * Fm) + 2.0 * L2 * Fp * Fm;
    const double QFR = 2.0 * L0 * Fp * Fm + L2 * (Fp * Fp + Fm * Fm);
    return first + 0.25 * q * q * QFF + 0.25 * q * (q - 2.0) * QFR;
  }
  if (d != 2) throw CapabilityError("sphere_reduced_prediction supports d in {1, 2}");
  auto prof = angle_profile(2, q, cfg);
  double sum = 0.0;
  for (int n = 0; n <= profile.modes(); ++n) {
    const double mult = n == 0 ? 1.0 : 2.0;  // n and -n
    sum += mult * mode_weight(q, n) * std::norm(profile.F_hat[n]) * prof->circle_coeff(n).value;
  }
  return first + 4.0 * kPi * kPi * sum;
}

}  // namespace felab
