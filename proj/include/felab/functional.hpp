#pragma once

#include <array>
#include <complex>
#include <functional>
#include <string>

#include "felab/quadrature.hpp"
#include "felab/set_model.hpp"

namespace felab {

enum class PhiMethod { closed_form_1d, polar_quadrature_2d, grid_fft, convolution_oracle };

std::string to_string(PhiMethod m);

struct PhiResult {
  double phi = 0.0;
  double norm_q_pow_q = 0.0;
  double measure = 0.0;
  double error_estimate = 0.0;  // on norm_q_pow_q
  PhiMethod method = PhiMethod::closed_form_1d;
  bool converged = true;
};

// Fourier transform of 1_E at xi (d = 1 uses xi[0]).
std::complex<double> indicator_hat(const SetModel& E, const std::array<double, 2>& xi);
std::complex<double> indicator_hat(const SetModel& E, double xi);

// (p^{1/2p} q^{-1/2q})^d with p = q'.
double babenko_constant(double q, int d);

PhiResult phi_q(const SetModel& E, double q, const QuadratureConfig& cfg = {});

// ||1_E * ... * 1_E||_2^2 with q/2 factors: exact piecewise-polynomial arithmetic in
// d = 1, rasterized FFT convolution in d = 2.
PhiResult phi_even_oracle(const SetModel& E, int q, int grid_resolution = 1024);

// Riemann sum of |DFT|^q on a box four diameters wide; the error estimate compares
// against half resolution.
PhiResult phi_grid_fft(const SetModel& E, double q, int resolution = 2048);

// |  ||1_E||_q - ||1_E||_r | / |q - r|^{1/2} after dilating E to unit measure.
double q_continuity_probe(const SetModel& E, double q, double r, const QuadratureConfig& cfg = {});

// Every phi evaluation is checked against the Babenko bound; violations beyond the
// reported error are counted process-wide.
struct BabenkoStats {
  long evaluations = 0;
  long violations = 0;
  double worst_ratio = 0.0;  // max phi / C_q^d seen
};
BabenkoStats babenko_stats();
void reset_babenko_stats();
void babenko_guard(double phi, double err_phi, double q, int d);

// ---- frequency-side integration shared with the perturbation module

constexpr std::size_t kFreqComponents = 6;
using FreqVec = std::array<double, kFreqComponents>;

struct FrequencyOptions {
  double cutoff = 0.0;  // 0 selects the per-dimension default
  FreqVec abs_tol{};
  double rel_tol = 1e-10;
  // Known decay exponent s of a component (integrand ~ |xi|^{-s} per unit |xi|, after the
  // polar Jacobian); 0 means fit the exponent from two shells.
  FreqVec tail_exponent{};
  // Components still pre-asymptotic at the cutoff: the tail error is bounded by the
  // contribution of the last octave shell instead of the extrapolation mismatch.
  std::array<bool, kFreqComponents> shell_bounded_tail{};
  int max_subdivisions = 4000;
  // Radial panel width; 0 selects 1 / max(1, diameter).
  double panel_width = 0.0;
};

struct FrequencyIntegral {
  FreqVec value{}, error{};
  double cutoff = 0.0;
  bool converged = true;
};

// int_{R^d} g(|xi|, 1_E^(xi)) dxi for integrands with g(|xi|, conj z) = g(|xi|, z).
// [0, R] by panel quadrature (polar with nested angular trapezoid in d = 2); [R, inf)
// by octave extrapolation from the shells [R/4, R/2] and [R/2, R].
using FreqFn = std::function<FreqVec(double rho, std::complex<double> hat)>;
FrequencyIntegral integrate_frequency(const SetModel& E, const FreqFn& g, const FrequencyOptions& opt);

double default_cutoff(const SetModel& E, double q);

// Diagonal of the bounding box (exact in d = 1, sampled boundary in d = 2).
double set_diameter(const SetModel& E);

}  // namespace felab
