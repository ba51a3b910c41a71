#pragma once

#include <complex>
#include <vector>

#include "felab/quadrature.hpp"

namespace felab {

// One factor sgn(J)^odd * |J_order(scale * rho)|^power.
struct BesselFactor {
  double order = 0.0;
  double scale = 1.0;
  double power = 1.0;
  bool odd = true;
};

// prefactor * rho^rho_power * prod(factors), integrated over rho in (0, inf).
struct BesselProduct {
  double prefactor = 1.0;
  double rho_power = 0.0;
  std::vector<BesselFactor> factors;
};

struct BesselProductOptions {
  // Every factor's argument exceeds this at the numeric/asymptotic split.
  double asymptotic_argument = 25.0;
  double min_cut_polynomial = 6.0;
  double min_cut_general = 16.0;
  double max_cut = 2.0e5;
  int series_order = 10;
  int max_harmonics = 64;
};

double bessel_product_integrand(const BesselProduct& p, double rho);

// Integral over (0, inf): adaptive quadrature on [0, R] plus the tail on [R, inf)
// from the Hankel asymptotic expansion of every factor, summed term by term as
// generalized exponential integrals.
IntegralResult integrate_bessel_product(const BesselProduct& p, const QuadratureConfig& cfg,
                                        const BesselProductOptions& opt = {});

// The asymptotic tail alone, int_R^inf; `imag_residue` receives the imaginary part of
// the complex term sum (zero up to rounding for a correct expansion).
IntegralResult bessel_product_tail(const BesselProduct& p, double R, const BesselProductOptions& opt = {},
                                   double* imag_residue = nullptr);

// Fourier coefficients of sgn(cos)^odd |cos|^s in cos(m' t), m' = 2m + odd.
double abs_cos_power_coefficient(double s, bool odd, int m);

}  // namespace felab
