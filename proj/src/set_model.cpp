#include "felab/set_model.hpp"

#include <boost/math/tools/roots.hpp>
#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "felab/errors.hpp"
#include "felab/quadrature.hpp"

namespace felab {

namespace {

constexpr double kTwoPi = 2.0 * kPi;

double norm2(const std::array<double, 2>& x) { return std::hypot(x[0], x[1]); }

}  // namespace

// ---------------------------------------------------------------- AffineMap

AffineMap AffineMap::identity(int d) {
  AffineMap m;
  m.d = d;
  return m;
}

AffineMap AffineMap::translation(int d, double tx, double ty) {
  AffineMap m = identity(d);
  m.v = {tx, d == 1 ? 0.0 : ty};
  return m;
}

AffineMap AffineMap::linear(double a11, double a12, double a21, double a22) {
  AffineMap m;
  m.A = {a11, a12, a21, a22};
  return m;
}

double AffineMap::det() const { return d == 1 ? A[0] : A[0] * A[3] - A[1] * A[2]; }

bool AffineMap::measure_preserving() const { return std::abs(std::abs(det()) - 1.0) <= 1e-12; }

std::array<double, 2> AffineMap::apply(const std::array<double, 2>& x) const {
  if (d == 1) return {A[0] * x[0] + v[0], 0.0};
  return {A[0] * x[0] + A[1] * x[1] + v[0], A[2] * x[0] + A[3] * x[1] + v[1]};
}

AffineMap AffineMap::inverse() const {
  const double D = det();
  if (D == 0.0) throw DomainError("singular affine map");
  AffineMap m;
  m.d = d;
  if (d == 1) {
    m.A[0] = 1.0 / A[0];
    m.v[0] = -v[0] / A[0];
    return m;
  }
  m.A = {A[3] / D, -A[1] / D, -A[2] / D, A[0] / D};
  m.v = {-(m.A[0] * v[0] + m.A[1] * v[1]), -(m.A[2] * v[0] + m.A[3] * v[1])};
  return m;
}

AffineMap AffineMap::then(const AffineMap& o) const {
  AffineMap m;
  m.d = d;
  if (d == 1) {
    m.A[0] = o.A[0] * A[0];
    m.v[0] = o.A[0] * v[0] + o.v[0];
    return m;
  }
  m.A = {o.A[0] * A[0] + o.A[1] * A[2], o.A[0] * A[1] + o.A[1] * A[3], o.A[2] * A[0] + o.A[3] * A[2],
         o.A[2] * A[1] + o.A[3] * A[3]};
  m.v = {o.A[0] * v[0] + o.A[1] * v[1] + o.v[0], o.A[2] * v[0] + o.A[3] * v[1] + o.v[1]};
  return m;
}

double AffineMap::distance_from_identity() const {
  if (d == 1) return std::hypot(A[0] - 1.0, v[0]);
  double s = (A[0] - 1) * (A[0] - 1) + A[1] * A[1] + A[2] * A[2] + (A[3] - 1) * (A[3] - 1);
  s += v[0] * v[0] + v[1] * v[1];
  return std::sqrt(s);
}

// ---------------------------------------------------------------- IntervalSet

IntervalSet::IntervalSet(std::vector<std::pair<double, double>> intervals) {
  for (const auto& [l, r] : intervals) {
    if (!std::isfinite(l) || !std::isfinite(r)) throw InvalidSetError("interval endpoints must be finite");
    if (!(l < r)) throw InvalidSetError("interval requires left < right");
  }
  std::sort(intervals.begin(), intervals.end());
  for (const auto& iv : intervals) {
    if (!iv_.empty() && iv.first <= iv_.back().second) {
      iv_.back().second = std::max(iv_.back().second, iv.second);
    } else {
      iv_.push_back(iv);
    }
  }
  if (iv_.empty()) throw InvalidSetError("interval set must have positive measure");
}

double IntervalSet::measure() const {
  double m = 0.0;
  for (const auto& [l, r] : iv_) m += r - l;
  return m;
}

double IntervalSet::coverage(double a, double b) const {
  double c = 0.0;
  for (const auto& [l, r] : iv_) c += std::max(0.0, std::min(r, b) - std::max(l, a));
  return c;
}

// ---------------------------------------------------------------- StarSet

StarSet::StarSet(std::array<double, 2> center, double c0, std::vector<double> a, std::vector<double> b,
                 AffineMap affine)
    : center_(center), c0_(c0), a_(std::move(a)), b_(std::move(b)), affine_(affine) {
  affine_.d = 2;
  if (a_.size() != b_.size()) throw InvalidSetError("star set: cosine and sine coefficient counts differ");
  if (!(affine_.det() > 0.0)) throw InvalidSetError("star set: affine part must have positive determinant");
  if (!(min_radius() > 0.0)) throw InvalidSetError("star set: radius function must be positive");
}

StarSet StarSet::disc(double radius) { return StarSet({0.0, 0.0}, radius, {}, {}); }

StarSet StarSet::ellipse(const AffineMap& T) { return StarSet({0.0, 0.0}, 1.0, {}, {}, T); }

bool StarSet::is_ellipse() const {
  for (std::size_t n = 0; n < a_.size(); ++n)
    if (a_[n] != 0.0 || b_[n] != 0.0) return false;
  return true;
}

double StarSet::radius(double t) const {
  double r = c0_;
  for (std::size_t n = 0; n < a_.size(); ++n) {
    const double k = static_cast<double>(n + 1);
    r += a_[n] * std::cos(k * t) + b_[n] * std::sin(k * t);
  }
  return r;
}

double StarSet::radius_derivative(double t) const {
  double r = 0.0;
  for (std::size_t n = 0; n < a_.size(); ++n) {
    const double k = static_cast<double>(n + 1);
    r += k * (-a_[n] * std::sin(k * t) + b_[n] * std::cos(k * t));
  }
  return r;
}

namespace {
int radius_grid(int modes) { return std::max(256, 64 * (modes + 1)); }
}  // namespace

double StarSet::max_radius() const {
  const int M = radius_grid(modes());
  double m = -std::numeric_limits<double>::infinity();
  for (int j = 0; j < M; ++j) m = std::max(m, radius(kTwoPi * j / M));
  return m;
}

double StarSet::min_radius() const {
  const int M = radius_grid(modes());
  double m = std::numeric_limits<double>::infinity();
  for (int j = 0; j < M; ++j) m = std::min(m, radius(kTwoPi * j / M));
  return m;
}

double StarSet::measure() const {
  double s = kTwoPi * c0_ * c0_;
  for (std::size_t n = 0; n < a_.size(); ++n) s += kPi * (a_[n] * a_[n] + b_[n] * b_[n]);
  return affine_.det() * 0.5 * s;
}

std::array<double, 2> StarSet::star_point() const { return affine_.apply(center_); }

bool StarSet::contains(const std::array<double, 2>& x) const {
  const std::array<double, 2> z = affine_.inverse().apply(x);
  const std::array<double, 2> y{z[0] - center_[0], z[1] - center_[1]};
  return norm2(y) <= radius(std::atan2(y[1], y[0]));
}

double StarSet::radial_about(const std::array<double, 2>& p, double theta) const {
  const AffineMap inv = affine_.inverse();
  const std::array<double, 2> alpha{std::cos(theta), std::sin(theta)};
  const std::array<double, 2> w{inv.A[0] * alpha[0] + inv.A[1] * alpha[1], inv.A[2] * alpha[0] + inv.A[3] * alpha[1]};
  const std::array<double, 2> pz = inv.apply(p);
  const std::array<double, 2> y0{pz[0] - center_[0], pz[1] - center_[1]};
  const double nw = norm2(w), ny0 = norm2(y0);
  if (ny0 <= 1e-14 * (1.0 + norm2(center_))) return radius(std::atan2(w[1], w[0])) / nw;
  if (is_ellipse()) {
    const double bq = y0[0] * w[0] + y0[1] * w[1];
    const double cq = ny0 * ny0 - c0_ * c0_;
    if (cq >= 0.0) throw InvalidSetError("radial function requested about a point outside the set");
    return (-bq + std::sqrt(bq * bq - nw * nw * cq)) / (nw * nw);
  }
  auto h = [&](double s) {
    const double y1 = y0[0] + s * w[0], y2 = y0[1] + s * w[1];
    return std::hypot(y1, y2) - radius(std::atan2(y2, y1));
  };
  if (!(h(0.0) < 0.0)) throw InvalidSetError("radial function requested about a point outside the set");
  const double smax = (max_radius() + ny0) / nw * 1.01;
  const int steps = 128;
  double lo = 0.0, hlo = h(0.0);
  for (int i = 1; i <= steps; ++i) {
    const double s = smax * i / steps;
    const double hs = h(s);
    if (hs >= 0.0) {
      if (hs == 0.0) return s;
      boost::uintmax_t iters = 200;
      auto [x0, x1] = boost::math::tools::toms748_solve(h, lo, s, hlo, hs,
                                                        boost::math::tools::eps_tolerance<double>(52), iters);
      return 0.5 * (x0 + x1);
    }
    lo = s;
    hlo = hs;
  }
  throw InvalidSetError("radial function: boundary not found along ray");
}

StarSet StarSet::with_affine(const AffineMap& outer) const {
  return StarSet(center_, c0_, a_, b_, affine_.then(outer));
}

// ---------------------------------------------------------------- SetModel helpers

int dimension(const SetModel& E) { return std::holds_alternative<IntervalSet>(E) ? 1 : 2; }

double measure(const SetModel& E) {
  return std::visit([](const auto& s) { return s.measure(); }, E);
}

SetModel apply_affine(const SetModel& E, const AffineMap& T) {
  if (const auto* iv = std::get_if<IntervalSet>(&E)) {
    if (T.A[0] == 0.0) throw DomainError("singular affine map");
    std::vector<std::pair<double, double>> out;
    for (const auto& [l, r] : iv->intervals()) {
      double x = T.A[0] * l + T.v[0], y = T.A[0] * r + T.v[0];
      if (x > y) std::swap(x, y);
      out.emplace_back(x, y);
    }
    return IntervalSet(out);
  }
  return std::get<StarSet>(E).with_affine(T);
}

SetModel normalize_measure(const SetModel& E, double target) {
  const int d = dimension(E);
  const double lam = std::pow(target / measure(E), 1.0 / d);
  AffineMap T = AffineMap::identity(d);
  T.A = {lam, 0.0, 0.0, lam};
  return apply_affine(E, T);
}

SetModel unit_ball(int d) {
  if (d == 1) return IntervalSet({{-1.0, 1.0}});
  if (d == 2) return StarSet::disc(1.0);
  throw CapabilityError("set models exist for d in {1, 2}");
}

double SphereProfile::ab_square_integral() const {
  if (d == 1) return a_plus * a_plus + a_minus * a_minus + b_plus * b_plus + b_minus * b_minus;
  double s = 0.0;
  for (std::size_t j = 0; j < a_grid.size(); ++j) s += a_grid[j] * a_grid[j] + b_grid[j] * b_grid[j];
  return s * kTwoPi / static_cast<double>(a_grid.size());
}

SphereProfile SphereProfile::one_dimensional(double a_plus, double a_minus, double b_plus, double b_minus) {
  SphereProfile p;
  p.d = 1;
  p.a_plus = a_plus;
  p.a_minus = a_minus;
  p.b_plus = b_plus;
  p.b_minus = b_minus;
  p.F_plus = b_plus - a_plus;
  p.F_minus = b_minus - a_minus;
  return p;
}

// ---------------------------------------------------------------- symdiff

namespace {

struct BBox {
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  void add(const std::array<double, 2>& p) {
    x0 = std::min(x0, p[0]);
    x1 = std::max(x1, p[0]);
    y0 = std::min(y0, p[1]);
    y1 = std::max(y1, p[1]);
  }
};

void add_boundary(BBox& box, const StarSet& s) {
  const int M = radius_grid(s.modes());
  for (int j = 0; j < M; ++j) {
    const double t = kTwoPi * j / M;
    const double r = s.radius(t) * 1.02;
    box.add(s.affine().apply({s.center()[0] + r * std::cos(t), s.center()[1] + r * std::sin(t)}));
  }
}

double symdiff_grid(const StarSet& e1, const StarSet& e2, int n) {
  BBox box;
  add_boundary(box, e1);
  add_boundary(box, e2);
  const double hx = (box.x1 - box.x0) / n, hy = (box.y1 - box.y0) / n;
  long count = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const std::array<double, 2> x{box.x0 + (i + 0.5) * hx, box.y0 + (j + 0.5) * hy};
      if (e1.contains(x) != e2.contains(x)) ++count;
    }
  return count * hx * hy;
}

double symdiff_radial(const StarSet& e1, const StarSet& e2, const std::array<double, 2>& p) {
  QuadratureConfig cfg;
  cfg.abs_tol = 1e-13;
  cfg.rel_tol = 1e-12;
  cfg.max_subdivisions = 4000;
  const int panels = 16 * (std::max(e1.modes(), e2.modes()) + 1);
  std::vector<double> bp(panels + 1);
  for (int i = 0; i <= panels; ++i) bp[i] = kTwoPi * i / panels;
  return integrate_adaptive(
             [&](double t) {
               const double r1 = e1.radial_about(p, t), r2 = e2.radial_about(p, t);
               return 0.5 * std::abs(r1 * r1 - r2 * r2);
             },
             bp, cfg)
      .value;
}

bool same_point(const std::array<double, 2>& a, const std::array<double, 2>& b) {
  return std::hypot(a[0] - b[0], a[1] - b[1]) <= 1e-12 * (1.0 + norm2(a));
}

}  // namespace

double symdiff_measure(const SetModel& E1, const SetModel& E2, int grid_resolution) {
  if (dimension(E1) != dimension(E2)) throw DomainError("symdiff_measure: incompatible dimensions");
  if (dimension(E1) == 1) {
    const auto& a = std::get<IntervalSet>(E1);
    const auto& b = std::get<IntervalSet>(E2);
    double common = 0.0;
    for (const auto& [l, r] : a.intervals()) common += b.coverage(l, r);
    return std::max(0.0, a.measure() + b.measure() - 2.0 * common);
  }
  const auto& a = std::get<StarSet>(E1);
  const auto& b = std::get<StarSet>(E2);
  const auto pa = a.star_point(), pb = b.star_point();
  if (same_point(pa, pb)) return symdiff_radial(a, b, pa);
  // A star point on the other ellipse's boundary is rejected by radial_about; the grid
  // handles that case.
  try {
    if (b.is_ellipse() && b.contains(pa)) return symdiff_radial(a, b, pa);
    if (a.is_ellipse() && a.contains(pb)) return symdiff_radial(a, b, pb);
  } catch (const DomainError&) {
  }
  return symdiff_grid(a, b, grid_resolution);
}

// ---------------------------------------------------------------- dist

namespace {

using Vec = std::vector<double>;

struct NMResult {
  Vec x;
  double f;
  bool converged;
};

NMResult nelder_mead(const std::function<double(const Vec&)>& f, Vec x0, const Vec& step, int max_iter, double tol) {
  const std::size_t n = x0.size();
  std::vector<Vec> s(n + 1, x0);
  Vec fv(n + 1);
  for (std::size_t i = 0; i < n; ++i) s[i + 1][i] += step[i];
  for (std::size_t i = 0; i <= n; ++i) fv[i] = f(s[i]);
  bool converged = false;
  for (int it = 0; it < max_iter; ++it) {
    std::vector<std::size_t> idx(n + 1);
    for (std::size_t i = 0; i <= n; ++i) idx[i] = i;
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
    std::vector<Vec> s2;
    Vec f2;
    for (auto i : idx) {
      s2.push_back(s[i]);
      f2.push_back(fv[i]);
    }
    s.swap(s2);
    fv.swap(f2);
    double size = 0.0;
    for (std::size_t i = 1; i <= n; ++i)
      for (std::size_t k = 0; k < n; ++k) size = std::max(size, std::abs(s[i][k] - s[0][k]));
    if (fv[n] - fv[0] <= tol && size <= 1e-8) {
      converged = true;
      break;
    }
    Vec c(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < n; ++k) c[k] += s[i][k] / n;
    auto along = [&](double t) {
      Vec x(n);
      for (std::size_t k = 0; k < n; ++k) x[k] = c[k] + t * (s[n][k] - c[k]);
      return x;
    };
    const Vec xr = along(-1.0);
    const double fr = f(xr);
    if (fr < fv[0]) {
      const Vec xe = along(-2.0);
      const double fe = f(xe);
      if (fe < fr) {
        s[n] = xe;
        fv[n] = fe;
      } else {
        s[n] = xr;
        fv[n] = fr;
      }
    } else if (fr < fv[n - 1]) {
      s[n] = xr;
      fv[n] = fr;
    } else {
      const Vec xc = fr < fv[n] ? along(-0.5) : along(0.5);
      const double fc = f(xc);
      if (fc < std::min(fr, fv[n])) {
        s[n] = xc;
        fv[n] = fc;
      } else {
        for (std::size_t i = 1; i <= n; ++i) {
          for (std::size_t k = 0; k < n; ++k) s[i][k] = s[0][k] + 0.5 * (s[i][k] - s[0][k]);
          fv[i] = f(s[i]);
        }
      }
    }
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i <= n; ++i)
    if (fv[i] < fv[best]) best = i;
  return {s[best], fv[best], converged};
}

// Ellipse with area m: T = sqrt(m/pi) Rot(phi) diag(e^tau, e^-tau), center (cx, cy).
AffineMap ellipse_map(const Vec& x, double m) {
  const double s = std::sqrt(m / kPi);
  const double c = std::cos(x[3]), sn = std::sin(x[3]);
  const double l1 = s * std::exp(x[2]), l2 = s * std::exp(-x[2]);
  AffineMap T = AffineMap::linear(c * l1, -sn * l2, sn * l1, c * l2);
  T.v = {x[0], x[1]};
  return T;
}

// Moment-matched starting ellipse parameters.
Vec moment_start(const StarSet& E) {
  const auto p = E.star_point();
  const int M = 1024;
  double m = 0.0, mx = 0.0, my = 0.0, sxx = 0.0, sxy = 0.0, syy = 0.0;
  const double dt = kTwoPi / M;
  for (int j = 0; j < M; ++j) {
    const double t = j * dt, c = std::cos(t), s = std::sin(t);
    const double R = E.radial_about(p, t);
    m += 0.5 * R * R * dt;
    mx += R * R * R / 3.0 * c * dt;
    my += R * R * R / 3.0 * s * dt;
    const double r4 = R * R * R * R / 4.0 * dt;
    sxx += r4 * c * c;
    sxy += r4 * c * s;
    syy += r4 * s * s;
  }
  // Central moments about the centroid p + (mx, my)/m.
  const double ux = mx / m, uy = my / m;
  sxx = sxx / m - ux * ux;
  sxy = sxy / m - ux * uy;
  syy = syy / m - uy * uy;
  const double tr = sxx + syy, det = sxx * syy - sxy * sxy;
  const double disc = std::sqrt(std::max(0.0, 0.25 * tr * tr - det));
  const double l1 = 0.5 * tr + disc, l2 = std::max(0.5 * tr - disc, 1e-300);
  const double phi = 0.5 * std::atan2(2.0 * sxy, sxx - syy);
  return {p[0] + ux, p[1] + uy, 0.25 * std::log(l1 / l2), phi};
}

}  // namespace

DistResult dist_to_ellipsoids(const SetModel& E, const DistConfig& cfg) {
  const double m = measure(E);
  if (!(m > 0.0)) throw DomainError("dist_to_ellipsoids: |E| must be positive");
  DistResult res;
  if (const auto* iv = std::get_if<IntervalSet>(&E)) {
    // Coverage |E cap [t, t+m]| is piecewise linear in t; its maximum sits at a breakpoint.
    double best = -1.0, best_t = 0.0;
    for (const auto& [l, r] : iv->intervals()) {
      for (double t : {l, r, l - m, r - m}) {
        const double c = iv->coverage(t, t + m);
        if (c > best) {
          best = c;
          best_t = t;
        }
      }
    }
    res.distance = 2.0 * (m - best) / m;
    res.best = AffineMap::identity(1);
    res.best.A[0] = 0.5 * m;
    res.best.v[0] = best_t + 0.5 * m;
    res.converged = true;
    return res;
  }
  const auto& S = std::get<StarSet>(E);
  auto objective = [&](const Vec& x) {
    const StarSet ell = StarSet::ellipse(ellipse_map(x, m));
    if (!ell.contains(S.star_point())) return 2.0;
    return symdiff_measure(E, SetModel(ell)) / m;
  };
  Vec x = moment_start(S);
  double fx = objective(x);
  bool converged = false;
  double scale = 0.1;
  for (int r = 0; r < std::max(1, cfg.restarts); ++r) {
    const NMResult nm = nelder_mead(objective, x, {scale, scale, scale, scale}, cfg.max_iterations, cfg.tol);
    const double gain = fx - nm.f;
    if (nm.f <= fx) {
      x = nm.x;
      fx = nm.f;
    }
    converged = nm.converged && gain <= 10.0 * cfg.tol;
    scale *= 0.2;
  }
  res.distance = std::clamp(fx, 0.0, 2.0);
  res.best = ellipse_map(x, m);
  res.converged = converged;
  return res;
}

// ---------------------------------------------------------------- boundary profile & balancing

namespace {

double radial_about_origin(const StarSet& S, double t) { return S.radial_about({0.0, 0.0}, t); }

SphereProfile profile_1d(const IntervalSet& E) {
  const double big = std::max({std::abs(E.min()), std::abs(E.max()), 1.0}) + 1.0;
  const double a_plus = E.coverage(1.0, big), a_minus = E.coverage(-big, -1.0);
  const double b_plus = 1.0 - E.coverage(0.0, 1.0), b_minus = 1.0 - E.coverage(-1.0, 0.0);
  return SphereProfile::one_dimensional(a_plus, a_minus, b_plus, b_minus);
}

std::vector<double> moments_2d(const StarSet& S) {
  if (!S.contains({0.0, 0.0})) throw InvalidSetError("balancing requires the origin inside the set");
  const int M = std::max(256, 16 * (S.modes() + 1));
  const double dt = kTwoPi / M, inv = 1.0 / std::sqrt(kPi);
  std::vector<double> mom(4, 0.0);
  for (int j = 0; j < M; ++j) {
    const double t = j * dt;
    const double R = radial_about_origin(S, t);
    const double F = 0.5 * (1.0 - R * R);
    mom[0] += F * std::cos(t);
    mom[1] += F * std::sin(t);
    mom[2] += F * std::cos(2 * t);
    mom[3] += F * std::sin(2 * t);
  }
  for (double& v : mom) v *= dt * inv;
  return mom;
}

// phi(y) = expm(M) y + v with M = [[x0, x1], [x1, -x0]], det = 1.
AffineMap balance_map(const std::vector<double>& x) {
  const double lam = std::hypot(x[0], x[1]);
  const double ch = std::cosh(lam), sh = lam > 0.0 ? std::sinh(lam) / lam : 1.0;
  AffineMap T = AffineMap::linear(ch + sh * x[0], sh * x[1], sh * x[1], ch - sh * x[0]);
  T.v = {x[2], x[3]};
  return T;
}

bool solve4(std::array<std::array<double, 5>, 4> a, std::vector<double>& x) {
  for (int c = 0; c < 4; ++c) {
    int piv = c;
    for (int r = c + 1; r < 4; ++r)
      if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
    if (std::abs(a[piv][c]) < 1e-14) return false;
    std::swap(a[c], a[piv]);
    for (int r = 0; r < 4; ++r) {
      if (r == c) continue;
      const double f = a[r][c] / a[c][c];
      for (int k = c; k < 5; ++k) a[r][k] -= f * a[c][k];
    }
  }
  x.assign(4, 0.0);
  for (int r = 0; r < 4; ++r) x[r] = a[r][4] / a[r][r];
  return true;
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

SphereProfile boundary_profile(const SetModel& E, int modes) {
  if (const auto* iv = std::get_if<IntervalSet>(&E)) return profile_1d(*iv);
  const auto& S = std::get<StarSet>(E);
  if (!S.contains({0.0, 0.0})) throw InvalidSetError("boundary_profile requires the origin inside the set");
  const int M = std::max(512, 16 * std::max(modes, S.modes() + 1));
  std::vector<double> R(M);
  for (int j = 0; j < M; ++j) R[j] = radial_about_origin(S, kTwoPi * j / M);
  auto at = [&](double t) {
    const int j = static_cast<int>(std::lround(t / kTwoPi * M)) % M;
    return R[j];
  };
  return SphereProfile::from_functions([&](double t) { return std::max(0.0, 0.5 * (at(t) * at(t) - 1.0)); },
                                       [&](double t) { return std::max(0.0, 0.5 * (1.0 - at(t) * at(t))); }, M,
                                       modes);
}

std::vector<double> balance_moments(const SetModel& E) {
  if (const auto* iv = std::get_if<IntervalSet>(&E)) {
    const SphereProfile p = profile_1d(*iv);
    return {(p.F_plus - p.F_minus) / std::sqrt(2.0)};
  }
  return moments_2d(std::get<StarSet>(E));
}

BalanceResult balance(const SetModel& E, int max_iter, double tol) {
  BalanceResult res;
  if (const auto* iv = std::get_if<IntervalSet>(&E)) {
    // F(+1) - F(-1) decreases monotonically as the set moves right.
    auto h = [&](double v) { return balance_moments(apply_affine(E, AffineMap::translation(1, v)))[0]; };
    const double span = std::max(std::abs(iv->min()), std::abs(iv->max())) + 2.0;
    double lo = -span, hi = span;
    double hlo = h(lo), hhi = h(hi);
    double v = 0.0;
    int iters = 0;
    if (std::abs(h(0.0)) <= tol) {
      v = 0.0;
    } else if (hlo * hhi > 0.0) {
      throw ConvergenceError("balance: could not bracket the recentring shift", std::abs(h(0.0)));
    } else {
      boost::uintmax_t it = static_cast<boost::uintmax_t>(std::max(max_iter, 64));
      auto [a, b] = boost::math::tools::toms748_solve(h, lo, hi, hlo, hhi,
                                                      boost::math::tools::eps_tolerance<double>(52), it);
      v = 0.5 * (a + b);
      iters = static_cast<int>(it);
    }
    res.map = AffineMap::translation(1, v);
    res.balanced = apply_affine(E, res.map);
    res.residual = std::abs(balance_moments(res.balanced)[0]);
    res.iterations = iters;
    if (!(res.residual <= std::max(tol, 1e-12)))
      throw ConvergenceError("balance: residual above tolerance", res.residual);
    return res;
  }
  std::vector<double> x(4, 0.0);
  auto G = [&](const std::vector<double>& y) { return balance_moments(apply_affine(E, balance_map(y))); };
  std::vector<double> g = G(x);
  double r = max_abs(g);
  int it = 0;
  while (r > tol) {
    if (it >= max_iter) throw ConvergenceError("balance: Newton iteration did not converge", r);
    ++it;
    std::array<std::array<double, 5>, 4> J{};
    const double h = 1e-6;
    for (int k = 0; k < 4; ++k) {
      std::vector<double> xp = x, xm = x;
      xp[k] += h;
      xm[k] -= h;
      const auto gp = G(xp), gm = G(xm);
      for (int i = 0; i < 4; ++i) J[i][k] = (gp[i] - gm[i]) / (2.0 * h);
    }
    for (int i = 0; i < 4; ++i) J[i][4] = -g[i];
    std::vector<double> step;
    if (!solve4(J, step)) {
      // Linearization at the disc: each moment responds to one parameter with slope -sqrt(pi).
      const double s = -std::sqrt(kPi);
      step = {-g[2] / s, -g[3] / s, -g[0] / s, -g[1] / s};
    }
    double t = 1.0;
    std::vector<double> xn(4), gn;
    double rn = r;
    for (int ls = 0; ls < 12; ++ls) {
      for (int k = 0; k < 4; ++k) xn[k] = x[k] + t * step[k];
      try {
        gn = G(xn);
        rn = max_abs(gn);
      } catch (const InvalidSetError&) {
        rn = std::numeric_limits<double>::infinity();
      }
      if (rn < r) break;
      t *= 0.5;
    }
    if (!(rn < r)) throw ConvergenceError("balance: Newton step failed to reduce the residual", r);
    x = xn;
    g = gn;
    r = rn;
  }
  res.map = balance_map(x);
  res.balanced = apply_affine(E, res.map);
  res.residual = r;
  res.iterations = it;
  return res;
}

double vanishing_check(const SphereProfile& F, int k) {
  if (F.d != 2) throw DomainError("vanishing_check is defined for d = 2 profiles");
  if (k < 0 || k > 2) throw DomainError("vanishing_check: k must be 0, 1 or 2");
  // |alpha - beta|^{2k} = (2 - 2 cos t)^k = sum_n w(n) e^{i n t}
  static const double w[3][3] = {{1.0, 0.0, 0.0}, {2.0, -1.0, 0.0}, {6.0, -4.0, 1.0}};
  double s = 0.0;
  for (int n = 0; n <= std::min(2, F.modes()); ++n) {
    const double mult = n == 0 ? 1.0 : 2.0;
    s += mult * std::norm(F.F_hat[n]) * w[k][n];
  }
  return 4.0 * kPi * kPi * s;
}

}  // namespace felab
