#pragma once

#include <iosfwd>
#include <vector>

#include "felab/quadrature.hpp"

namespace felab {

enum class KernelKind { K, L };

// q_d = 4 - 2/(d+1): continuity threshold for L-kind kernels.
double continuity_threshold(int d);
// 3 - 2/(d+1): threshold for K-kind kernels.
double k_threshold(int d);
void require_above_threshold(KernelKind kind, int d, double q);

// Fourier transform of the unit-ball indicator at radius r, d in {1, 2, 3}.
double ball_hat(int d, double r);

// Pointwise kernel value by the radial inverse transform.
IntegralResult kernel_value(KernelKind kind, int d, double q, double r, const QuadratureConfig& cfg);

// dK_q/dr by differentiating under the integral.
IntegralResult kernel_k_derivative(int d, double q, double r, const QuadratureConfig& cfg);

class RadialKernel {
public:
  RadialKernel() = default;
  RadialKernel(KernelKind kind, int d, double q, std::vector<double> radii, std::vector<double> values,
               std::vector<double> errors);

  KernelKind kind() const { return kind_; }
  int dimension() const { return d_; }
  double q() const { return q_; }
  double r_max() const { return radii_.empty() ? 0.0 : radii_.back(); }
  int interpolation_order() const { return 3; }
  const std::vector<double>& radii() const { return radii_; }
  const std::vector<double>& values() const { return values_; }
  const std::vector<double>& errors() const { return errors_; }
  double max_error() const;

  // Cubic interpolation on the uniform sample grid; r must lie in [0, r_max].
  double operator()(double r) const;

private:
  KernelKind kind_ = KernelKind::L;
  int d_ = 1;
  double q_ = 4.0;
  std::vector<double> radii_, values_, errors_;
};

RadialKernel kernel_profile(KernelKind kind, int d, double q, double r_max, int n_samples,
                            const QuadratureConfig& cfg);

// Default sampling: 2048 radii on [0, max(q, 4)].
RadialKernel kernel_profile(KernelKind kind, int d, double q, const QuadratureConfig& cfg);

// gamma_{q,d} = -K_q'(1). For d = 1 the value comes from the closed-form frequency integral.
IntegralResult gamma_qd(int d, double q, const QuadratureConfig& cfg);
IntegralResult gamma_spectral(int d, double q, const QuadratureConfig& cfg);
IntegralResult gamma_closed_form_1d(double q, const QuadratureConfig& cfg);

struct FirstVariationResult {
  double inner_min = 0.0;
  double outer_max = 0.0;
  bool satisfied = false;
  double margin = 0.0;
  double error_bound = 0.0;
};

FirstVariationResult first_variation_check(int d, double q, const std::vector<double>& inner_grid,
                                           const std::vector<double>& outer_grid, const QuadratureConfig& cfg);

// n midpoints of equal cells of [a, b].
std::vector<double> cell_centered_grid(double a, double b, int n);

double rho_d(int d);

struct AsymptoticFit {
  double slope = 0.0;
  double kappa_estimate = 0.0;
};

AsymptoticFit gamma_asymptotic_fit(int d, const std::vector<double>& q_list, const QuadratureConfig& cfg);

void write_profile_csv(std::ostream& os, const RadialKernel& k);

}  // namespace felab
