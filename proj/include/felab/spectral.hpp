#pragma once

#include <memory>
#include <vector>

#include "felab/quadrature.hpp"
#include "felab/set_model.hpp"

namespace felab {

// theta -> L_q(x) at |x| = 2 sin(theta/2) on [0, pi], sampled once on composite
// Gauss-Kronrod panels (graded toward both endpoints) and reused for every mode.
class AngleProfile {
public:
  AngleProfile(int d, double q, const QuadratureConfig& cfg);

  int dimension() const { return d_; }
  double q() const { return q_; }
  const std::vector<double>& nodes() const { return theta_; }
  const std::vector<double>& values() const { return value_; }

  // d = 2: (2 pi)^{-1} int_0^{2 pi} L(theta) cos(n theta) d theta.
  IntegralResult circle_coeff(int n) const;
  // Funk-Hecke multiplier of degree k on S^{d-1}.
  IntegralResult eigenvalue(int k) const;

private:
  IntegralResult weighted(const std::vector<double>& w) const;

  int d_;
  double q_;
  std::vector<double> theta_, wk_, wg_, value_, error_;
};

// Process-wide cache keyed by (d, q, tolerances).
std::shared_ptr<const AngleProfile> angle_profile(int d, double q, const QuadratureConfig& cfg);

IntegralResult circle_coeff(double q, int n, const QuadratureConfig& cfg);

// Independent adaptive evaluation of |S^{d-2}| int_0^pi L(2 sin(t/2)) P_k(cos t) sin^{d-2} t dt.
IntegralResult funk_hecke_eigenvalue(int d, double q, int k, const QuadratureConfig& cfg);

// 4 pi^2 int_0^inf |Bhat(rho)|^{q-2} rho J_{k+d/2-1}(2 pi rho)^2 d rho.
IntegralResult hankel_eigenvalue(int d, double q, int k, const QuadratureConfig& cfg);

// q^2/4 + q(q-2)/4 (-1)^n
double mode_weight(double q, int n);

struct ModeRecord {
  int n = 0;
  double ell_hat = 0.0;
  double combined = 0.0;
  double margin = 0.0;
  double error = 0.0;
};

struct ModeSpectrum {
  int d = 2;
  double q = 4.0;
  std::vector<ModeRecord> modes;
  double gamma = 0.0;
  double gamma_error = 0.0;
  // (q/2) gamma times the comparison constant between int (a^2 + b^2) and the
  // mode sum; margin(n) = this - combined(n).
  double first_order = 0.0;
  double stability_constant = 0.0;  // NaN when no mode n >= 3 exists (d = 1)
  std::vector<int> neutral_modes;
  int worst_mode = -1;  // argmin of margin over n >= 3
  double worst_margin = 0.0;
};

ModeSpectrum mode_margins(int d, double q, int n_max, const QuadratureConfig& cfg);

// -(q/2) gamma int (a^2 + b^2) + (q^2/4) Q(F, F) + (q(q-2)/4) Q(F, F~).
double sphere_reduced_prediction(const SphereProfile& profile, int d, double q, const QuadratureConfig& cfg);

}  // namespace felab
