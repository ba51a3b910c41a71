#include "felab/piecewise_poly.hpp"

#include <algorithm>

#include "felab/errors.hpp"

namespace felab {

namespace {

double horner(const std::vector<double>& c, double t) {
  double v = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * t + *it;
  return v;
}

// Coefficients of p(t + h).
std::vector<double> taylor_shift(std::vector<double> c, double h) {
  const std::size_t n = c.size();
  for (std::size_t i = 0; i + 1 < n; ++i)
    for (std::size_t j = n - 1; j > i; --j) c[j - 1] += h * c[j];
  return c;
}

}  // namespace

PiecewisePoly::PiecewisePoly(std::vector<double> breaks, std::vector<std::vector<double>> coefficients, double tail)
    : breaks_(std::move(breaks)), coef_(std::move(coefficients)), tail_(tail) {
  if (!breaks_.empty() && coef_.size() + 1 != breaks_.size())
    throw DomainError("piecewise polynomial: piece count must be one less than break count");
}

PiecewisePoly PiecewisePoly::indicator(const IntervalSet& E) {
  std::vector<double> br;
  std::vector<std::vector<double>> c;
  const auto& iv = E.intervals();
  for (std::size_t i = 0; i < iv.size(); ++i) {
    if (br.empty() || br.back() != iv[i].first) {
      if (!br.empty()) c.push_back({0.0});
      br.push_back(iv[i].first);
    }
    c.push_back({1.0});
    br.push_back(iv[i].second);
  }
  return PiecewisePoly(br, c);
}

int PiecewisePoly::degree() const {
  std::size_t d = 0;
  for (const auto& c : coef_) d = std::max(d, c.size());
  return static_cast<int>(d) - 1;
}

double PiecewisePoly::operator()(double x) const {
  if (breaks_.empty() || x < breaks_.front()) return 0.0;
  if (x >= breaks_.back()) return tail_;
  const std::size_t k = static_cast<std::size_t>(std::upper_bound(breaks_.begin(), breaks_.end(), x) - breaks_.begin()) - 1;
  return horner(coef_[k], x - breaks_[k]);
}

double PiecewisePoly::derivative(double x) const {
  if (breaks_.empty() || x < breaks_.front() || x >= breaks_.back()) return 0.0;
  const std::size_t k = static_cast<std::size_t>(std::upper_bound(breaks_.begin(), breaks_.end(), x) - breaks_.begin()) - 1;
  const auto& c = coef_[k];
  double v = 0.0;
  const double t = x - breaks_[k];
  for (std::size_t j = c.size(); j-- > 1;) v = v * t + j * c[j];
  return v;
}

PiecewisePoly PiecewisePoly::antiderivative() const {
  if (tail_ != 0.0) throw DomainError("antiderivative requires compact support");
  std::vector<std::vector<double>> c(coef_.size());
  double acc = 0.0;
  for (std::size_t k = 0; k < coef_.size(); ++k) {
    c[k].assign(coef_[k].size() + 1, 0.0);
    c[k][0] = acc;
    for (std::size_t j = 0; j < coef_[k].size(); ++j) c[k][j + 1] = coef_[k][j] / (j + 1.0);
    acc = horner(c[k], breaks_[k + 1] - breaks_[k]);
  }
  return PiecewisePoly(breaks_, c, acc);
}

PiecewisePoly PiecewisePoly::shifted(double s) const {
  std::vector<double> br(breaks_);
  for (double& b : br) b += s;
  return PiecewisePoly(br, coef_, tail_);
}

PiecewisePoly PiecewisePoly::combine(const PiecewisePoly& f, double a, const PiecewisePoly& g, double b) {
  std::vector<double> br(f.breaks_);
  br.insert(br.end(), g.breaks_.begin(), g.breaks_.end());
  std::sort(br.begin(), br.end());
  br.erase(std::unique(br.begin(), br.end()), br.end());
  // Local expansion of one operand on [x0, x1].
  auto local = [](const PiecewisePoly& p, double x0, double x1) -> std::vector<double> {
    if (p.breaks_.empty() || x1 <= p.breaks_.front()) return {0.0};
    if (x0 >= p.breaks_.back()) return {p.tail_};
    const double mid = 0.5 * (x0 + x1);
    // mid can round onto x1 for ulp-wide pieces; clamp to the last real piece.
    const std::size_t k = std::min(
        static_cast<std::size_t>(std::upper_bound(p.breaks_.begin(), p.breaks_.end(), mid) - p.breaks_.begin()) - 1,
        p.coef_.size() - 1);
    return taylor_shift(p.coef_[k], x0 - p.breaks_[k]);
  };
  std::vector<std::vector<double>> c(br.size() > 0 ? br.size() - 1 : 0);
  for (std::size_t k = 0; k + 1 < br.size(); ++k) {
    const auto cf = local(f, br[k], br[k + 1]);
    const auto cg = local(g, br[k], br[k + 1]);
    c[k].assign(std::max(cf.size(), cg.size()), 0.0);
    for (std::size_t j = 0; j < cf.size(); ++j) c[k][j] += a * cf[j];
    for (std::size_t j = 0; j < cg.size(); ++j) c[k][j] += b * cg[j];
  }
  return PiecewisePoly(br, c, a * f.tail_ + b * g.tail_);
}

PiecewisePoly PiecewisePoly::convolve(const IntervalSet& E) const {
  // (f * 1_[l,r])(x) = P(x - l) - P(x - r) with P the antiderivative.
  const PiecewisePoly P = antiderivative();
  PiecewisePoly acc;
  for (const auto& [l, r] : E.intervals()) {
    const PiecewisePoly piece = combine(P.shifted(l), 1.0, P.shifted(r), -1.0);
    acc = combine(acc, 1.0, piece, 1.0);
  }
  acc.tail_ = 0.0;
  return acc;
}

PiecewisePoly PiecewisePoly::convolution_power(const IntervalSet& E, int m) {
  if (m < 1) throw DomainError("convolution power must be at least 1");
  PiecewisePoly f = indicator(E);
  for (int i = 1; i < m; ++i) f = f.convolve(E);
  return f;
}

double PiecewisePoly::square_integral() const {
  if (tail_ != 0.0) throw DomainError("square_integral requires compact support");
  double s = 0.0;
  for (std::size_t k = 0; k < coef_.size(); ++k) {
    const auto& c = coef_[k];
    std::vector<double> sq(2 * c.size() - 1, 0.0);
    for (std::size_t i = 0; i < c.size(); ++i)
      for (std::size_t j = 0; j < c.size(); ++j) sq[i + j] += c[i] * c[j];
    const double h = breaks_[k + 1] - breaks_[k];
    double v = 0.0;
    for (std::size_t j = sq.size(); j-- > 0;) v = v * h + sq[j] / (j + 1.0);
    s += v * h;
  }
  return s;
}

}  // namespace felab
