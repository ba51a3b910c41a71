#pragma once

#include <vector>

#include "felab/set_model.hpp"

namespace felab {

// Piecewise polynomial on the real line. Piece k lives on [breaks[k], breaks[k+1]]
// in the local variable t = x - breaks[k]; the function is 0 left of breaks.front()
// and equals `tail` right of breaks.back().
class PiecewisePoly {
public:
  PiecewisePoly() = default;
  PiecewisePoly(std::vector<double> breaks, std::vector<std::vector<double>> coefficients, double tail = 0.0);

  static PiecewisePoly indicator(const IntervalSet& E);

  const std::vector<double>& breaks() const { return breaks_; }
  const std::vector<std::vector<double>>& coefficients() const { return coef_; }
  double tail() const { return tail_; }
  int degree() const;

  double operator()(double x) const;
  double derivative(double x) const;

  // x -> int_{-inf}^x f.
  PiecewisePoly antiderivative() const;
  PiecewisePoly shifted(double s) const;  // x -> f(x - s)
  // a f + b g on the merged partition.
  static PiecewisePoly combine(const PiecewisePoly& f, double a, const PiecewisePoly& g, double b);

  PiecewisePoly convolve(const IntervalSet& E) const;
  // m-fold convolution power of 1_E.
  static PiecewisePoly convolution_power(const IntervalSet& E, int m);

  // int f^2 (f must have zero tail).
  double square_integral() const;

private:
  std::vector<double> breaks_;
  std::vector<std::vector<double>> coef_;
  double tail_ = 0.0;
};

}  // namespace felab
