#pragma once

#include <functional>
#include <string>
#include <vector>

#include "felab/quadrature.hpp"
#include "felab/set_model.hpp"

namespace felab {

// Contracted order of the expansion remainder.
enum class RemainderOrder { two_plus_rho, two, q_minus_one };

std::string to_string(RemainderOrder r);

// Expansion of ||1_E^||_q^q about the unit ball B with f = 1_E - 1_B.
struct ExpansionReport {
  double q = 4.0;
  int d = 1;
  double direct = 0.0;      // ||1_E^||_q^q
  double base = 0.0;        // ||1_B^||_q^q
  double term_K = 0.0;      // q <K_q, f>
  double term_LL = 0.0;     // (q^2/4) <f * L_q, f>
  double term_Lrefl = 0.0;  // (q(q-2)/4) <f * L_q, f~>
  double residual = 0.0;    // direct - base - terms
  double symdiff = 0.0;     // |E delta B|
  double residual_error = 0.0;
  double direct_error = 0.0;
  RemainderOrder remainder = RemainderOrder::two_plus_rho;

  double term_sum() const { return term_K + term_LL + term_Lrefl; }
};

// <K_q, f> in real space: exact interval pieces in d = 1, per-angle radial integrals
// of the kernel in d = 2 (E star-shaped about the origin).
IntegralResult inner_K(const SetModel& E, double q, const QuadratureConfig& cfg = {});

struct QuadraticTerms {
  double LL = 0.0;     // <f * L_q, f>
  double Lrefl = 0.0;  // <f * L_q, f~>
  double error_LL = 0.0, error_Lrefl = 0.0;
};

QuadraticTerms quadratic_terms(const SetModel& E, double q, const QuadratureConfig& cfg = {});

// Refuses (DomainError) outside the regime |E delta B| <= 0.3 |B|.
ExpansionReport expansion_report(const SetModel& E, double q, const QuadratureConfig& cfg = {});

using SetFamily = std::function<SetModel(double eps)>;

// Named families, every member of measure |B|:
//   d = 1: "sliver" [-1, 1-e] u [1, 1+e] (balanced), "translate" [-1+e, 1+e];
//   d = 2: "translate" (disc moved by e), "mode:k" (r = 1 + e cos k theta, dilated),
//          "corona:seed" (random modes 3..6 of total size e, then balanced).
SetFamily named_family(const std::string& name, int d);

struct SlopeResult {
  double slope = 0.0;
  bool noise_limited = false;
  std::vector<double> eps, residual, residual_error;
  std::vector<ExpansionReport> reports;
};

// Least-squares slope of log |residual| against log eps. Reports are computed in
// parallel across eps values.
SlopeResult remainder_slope(const SetFamily& family, double q, const std::vector<double>& eps_list,
                            const QuadratureConfig& cfg = {});

}  // namespace felab
