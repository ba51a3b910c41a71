#pragma once

#include <array>
#include <complex>
#include <utility>
#include <variant>
#include <vector>

namespace felab {

// x -> A x + v. For d = 1 only A[0] and v[0] are used.
struct AffineMap {
  int d = 2;
  std::array<double, 4> A{1.0, 0.0, 0.0, 1.0};  // row-major
  std::array<double, 2> v{0.0, 0.0};

  static AffineMap identity(int d);
  static AffineMap translation(int d, double tx, double ty = 0.0);
  static AffineMap linear(double a11, double a12, double a21, double a22);

  double det() const;
  bool measure_preserving() const;
  std::array<double, 2> apply(const std::array<double, 2>& x) const;
  AffineMap inverse() const;
  AffineMap then(const AffineMap& outer) const;  // outer o this
  // Frobenius distance of (A, v) from the identity.
  double distance_from_identity() const;
};

class IntervalSet {
public:
  IntervalSet() = default;
  // Sorts and merges overlapping or touching intervals; rejects empty results.
  explicit IntervalSet(std::vector<std::pair<double, double>> intervals);

  const std::vector<std::pair<double, double>>& intervals() const { return iv_; }
  double measure() const;
  double min() const { return iv_.front().first; }
  double max() const { return iv_.back().second; }
  // |E cap [a, b]|
  double coverage(double a, double b) const;

private:
  std::vector<std::pair<double, double>> iv_;
};

// E = { A (c + rho u(theta)) + v : 0 <= rho <= r(theta) },
// r(theta) = c0 + sum_n a_n cos(n theta) + b_n sin(n theta).
class StarSet {
public:
  StarSet() = default;
  StarSet(std::array<double, 2> center, double c0, std::vector<double> a, std::vector<double> b,
          AffineMap affine = AffineMap::identity(2));

  static StarSet disc(double radius = 1.0);
  // Ellipse T(B) for an affine map T.
  static StarSet ellipse(const AffineMap& T);

  const std::array<double, 2>& center() const { return center_; }
  double c0() const { return c0_; }
  const std::vector<double>& a() const { return a_; }
  const std::vector<double>& b() const { return b_; }
  const AffineMap& affine() const { return affine_; }
  int modes() const { return static_cast<int>(a_.size()); }
  bool is_ellipse() const;

  double radius(double theta) const;
  double radius_derivative(double theta) const;
  double max_radius() const;  // bound over a dense grid
  double min_radius() const;
  double measure() const;
  // Image of the star center.
  std::array<double, 2> star_point() const;
  bool contains(const std::array<double, 2>& x) const;
  // Radial function about p in direction theta (p must lie inside; the set must be
  // star-shaped about p along that ray for the first crossing to be the boundary).
  double radial_about(const std::array<double, 2>& p, double theta) const;

  StarSet with_affine(const AffineMap& outer) const;

private:
  std::array<double, 2> center_{0.0, 0.0};
  double c0_ = 1.0;
  std::vector<double> a_, b_;
  AffineMap affine_ = AffineMap::identity(2);
};

using SetModel = std::variant<IntervalSet, StarSet>;

int dimension(const SetModel& E);
double measure(const SetModel& E);
SetModel apply_affine(const SetModel& E, const AffineMap& T);
// Dilation about the origin so that |E| = target.
SetModel normalize_measure(const SetModel& E, double target);
SetModel unit_ball(int d);

struct SphereProfile {
  int d = 2;
  // d = 1: values at +1 and -1.
  double a_plus = 0, a_minus = 0, b_plus = 0, b_minus = 0, F_plus = 0, F_minus = 0;
  // d = 2: samples on the uniform grid theta_j = 2 pi j / M and coefficients
  // hat(n) = (2 pi)^{-1} int g e^{-i n theta}, n = 0..N.
  std::vector<double> a_grid, b_grid, F_grid;
  std::vector<std::complex<double>> a_hat, b_hat, F_hat;

  int modes() const { return F_hat.empty() ? 0 : static_cast<int>(F_hat.size()) - 1; }
  // int (a^2 + b^2) d sigma
  double ab_square_integral() const;

  static SphereProfile one_dimensional(double a_plus, double a_minus, double b_plus, double b_minus);
  template <class FA, class FB>
  static SphereProfile from_functions(const FA& a, const FB& b, int grid, int modes);
};

double symdiff_measure(const SetModel& E1, const SetModel& E2, int grid_resolution = 1024);

struct DistConfig {
  int restarts = 3;
  int max_iterations = 600;
  double tol = 1e-10;
};

struct DistResult {
  double distance = 0.0;
  AffineMap best;
  bool converged = true;
};

DistResult dist_to_ellipsoids(const SetModel& E, const DistConfig& cfg = {});

SphereProfile boundary_profile(const SetModel& E, int modes = 32);

struct BalanceResult {
  AffineMap map;
  SetModel balanced;
  double residual = 0.0;
  int iterations = 0;
};

// Degree <= 2 moments of F for the balanced set, excluding the constant mode
// (fixed by |E|): d = 2 returns {cos, sin, cos 2, sin 2} moments against the
// orthonormal basis; d = 1 returns F(+1) - F(-1).
std::vector<double> balance_moments(const SetModel& E);

BalanceResult balance(const SetModel& E, int max_iter = 20, double tol = 1e-12);

double vanishing_check(const SphereProfile& F, int k);

template <class FA, class FB>
SphereProfile SphereProfile::from_functions(const FA& a, const FB& b, int grid, int modes) {
  SphereProfile p;
  p.d = 2;
  const double two_pi = 6.283185307179586476925286766559;
  p.a_grid.resize(grid);
  p.b_grid.resize(grid);
  p.F_grid.resize(grid);
  for (int j = 0; j < grid; ++j) {
    const double t = two_pi * j / grid;
    p.a_grid[j] = a(t);
    p.b_grid[j] = b(t);
    p.F_grid[j] = p.b_grid[j] - p.a_grid[j];
  }
  auto coeffs = [&](const std::vector<double>& g) {
    std::vector<std::complex<double>> c(modes + 1);
    for (int n = 0; n <= modes; ++n) {
      std::complex<double> s = 0.0;
      for (int j = 0; j < grid; ++j) s += g[j] * std::polar(1.0, -two_pi * n * j / grid);
      c[n] = s / static_cast<double>(grid);
    }
    return c;
  };
  p.a_hat = coeffs(p.a_grid);
  p.b_hat = coeffs(p.b_grid);
  p.F_hat = coeffs(p.F_grid);
  return p;
}

}  // namespace felab
