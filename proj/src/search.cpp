#include "felab/search.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "felab/errors.hpp"
#include "felab/functional.hpp"
#include "felab/parallel.hpp"
#include "felab/random.hpp"

namespace felab {

Family Family::parse(const std::string& spec) {
  const auto colon = spec.find(':');
  const std::string kind = spec.substr(0, colon);
  int size = colon == std::string::npos ? -1 : std::atoi(spec.c_str() + colon + 1);
  Family f;
  if (kind == "intervals") {
    f.kind = FamilyKind::interval_unions;
    if (size < 0) size = 2;
    if (size < 1 || size > 6) throw DomainError("interval families allow 1 to 6 intervals");
  } else if (kind == "star") {
    f.kind = FamilyKind::star_modes;
    if (size < 0) size = 4;
    if (size < 1 || size > 12) throw DomainError("star families allow 1 to 12 modes");
  } else {
    throw DomainError("unknown family '" + spec + "' (expected intervals:k or star:N)");
  }
  f.size = size;
  return f;
}

std::string Family::name() const {
  return (kind == FamilyKind::interval_unions ? "intervals:" : "star:") + std::to_string(size);
}

void SearchConfig::validate() const {
  if (!std::isfinite(q) || !(q > 2.0)) throw DomainError("search requires a finite exponent q > 2");
  if (restarts < 1) throw DomainError("restarts must be positive");
  if (budget < restarts) throw DomainError("budget must be at least the number of restarts");
  if (!(initial_step > 0.0) || !(step_decay > 0.0 && step_decay < 1.0) || !(min_step > 0.0))
    throw DomainError("step schedule needs initial_step > 0, 0 < decay < 1, min_step > 0");
  if (ascents < 0) throw DomainError("ascents must be nonnegative");
  if (anneal_temperature < 0.0) throw DomainError("annealing temperature must be nonnegative");
  quad.validate();
}

SetModel family_member(const Family& f, const std::vector<double>& p) {
  if (static_cast<int>(p.size()) != f.parameters()) throw ArityError("wrong number of family parameters");
  for (double x : p)
    if (!std::isfinite(x)) throw InvalidSetError("non-finite family parameter");
  if (f.kind == FamilyKind::interval_unions) {
    std::vector<std::pair<double, double>> iv;
    for (int i = 0; i < f.size; ++i) {
      const double c = p[2 * i], w = std::exp(p[2 * i + 1]);
      iv.emplace_back(c - 0.5 * w, c + 0.5 * w);
    }
    const IntervalSet raw(iv);
    const double s = 2.0 / raw.measure();
    std::vector<std::pair<double, double>> scaled;
    for (const auto& [l, r] : raw.intervals()) scaled.emplace_back(s * l, s * r);
    return IntervalSet(scaled);
  }
  std::vector<double> a(f.size), b(f.size);
  for (int n = 0; n < f.size; ++n) {
    a[n] = p[2 * n];
    b[n] = p[2 * n + 1];
  }
  const StarSet raw({0.0, 0.0}, 1.0, a, b);
  // Very thin necks make the set nearly degenerate and the transform expensive.
  if (raw.min_radius() < 0.05) throw InvalidSetError("star radius too small for the search family");
  const double s = std::sqrt(kPi / raw.measure());
  for (int n = 0; n < f.size; ++n) {
    a[n] *= s;
    b[n] *= s;
  }
  return StarSet({0.0, 0.0}, s, a, b);
}

std::vector<double> family_parameters(const Family& f, const SetModel& E) {
  if (dimension(E) != f.dimension()) throw DomainError("start set dimension does not match the family");
  std::vector<double> p;
  if (f.kind == FamilyKind::interval_unions) {
    auto iv = std::get<IntervalSet>(E).intervals();
    if (static_cast<int>(iv.size()) > f.size) throw DomainError("start set has more intervals than the family");
    // Split the longest piece until the count matches; touching pieces represent the same set.
    while (static_cast<int>(iv.size()) < f.size) {
      auto it = std::max_element(iv.begin(), iv.end(),
                                 [](const auto& x, const auto& y) { return x.second - x.first < y.second - y.first; });
      const double m = 0.5 * (it->first + it->second);
      const auto right = std::make_pair(m, it->second);
      it->second = m;
      iv.insert(it + 1, right);
    }
    for (const auto& [l, r] : iv) {
      p.push_back(0.5 * (l + r));
      p.push_back(std::log(r - l));
    }
    return p;
  }
  const auto& s = std::get<StarSet>(E);
  if (s.affine().distance_from_identity() > 1e-14)
    throw DomainError("star start sets must not carry an affine part");
  p.assign(f.parameters(), 0.0);
  for (int n = 0; n < std::min(f.size, s.modes()); ++n) {
    p[2 * n] = s.a()[n] / s.c0();
    p[2 * n + 1] = s.b()[n] / s.c0();
  }
  return p;
}

std::vector<double> random_parameters(const Family& f, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> p(f.parameters());
  if (f.kind == FamilyKind::interval_unions) {
    for (int i = 0; i < f.size; ++i) {
      p[2 * i] = rng.uniform(-2.0, 2.0);
      p[2 * i + 1] = std::log(rng.uniform(0.2, 1.5));
    }
    return p;
  }
  double scale = 0.25;
  for (;;) {
    for (int n = 0; n < f.size; ++n) {
      p[2 * n] = rng.uniform(-scale, scale) / (n + 1);
      p[2 * n + 1] = rng.uniform(-scale, scale) / (n + 1);
    }
    try {
      family_member(f, p);
      return p;
    } catch (const InvalidSetError&) {
      scale *= 0.5;
    }
  }
}

QuadratureConfig search_quadrature(int d) {
  QuadratureConfig c;
  if (d == 2) c.frequency_cutoff = 8.0;
  return c;
}

namespace {

constexpr double kRejected = -std::numeric_limits<double>::infinity();

double evaluate(const SearchConfig& cfg, const std::vector<double>& p) {
  try {
    return phi_q(family_member(cfg.family, p), cfg.q, cfg.quad).phi;
  } catch (const InvalidSetError&) {
    return kRejected;
  }
}

struct Ascent {
  std::vector<double> best;
  double best_phi = kRejected;
  std::vector<double> phis;  // every evaluation in order
};

// Coordinate ascent with symmetric trials and step halving; every trial member is
// renormalized to |B| by family_member.
Ascent ascend(const SearchConfig& cfg, std::vector<double> p, double f, long budget, std::uint64_t seed) {
  Ascent out;
  out.best = p;
  out.best_phi = f;
  Rng rng(seed);
  double h = cfg.initial_step;
  long used = 0;
  while (used < budget && h >= cfg.min_step) {
    bool moved = false;
    for (std::size_t i = 0; i < p.size() && used < budget; ++i) {
      for (double sgn : {1.0, -1.0}) {
        if (used >= budget) break;
        std::vector<double> t = p;
        t[i] += sgn * h;
        const double ft = evaluate(cfg, t);
        ++used;
        out.phis.push_back(ft);
        bool accept = ft > f;
        if (!accept && cfg.anneal_temperature > 0.0 && ft != kRejected)
          accept = rng.uniform() < std::exp((ft - f) / cfg.anneal_temperature);
        if (ft > out.best_phi) {
          out.best_phi = ft;
          out.best = t;
        }
        if (accept) {
          moved = moved || ft > f;
          p = t;
          f = ft;
          break;
        }
      }
    }
    if (!moved) h *= cfg.step_decay;
  }
  return out;
}

void finish(const SearchConfig& cfg, const std::vector<double>& best, double best_phi,
            const std::vector<double>& phis, SearchResult& r) {
  r.best_set = family_member(cfg.family, best);
  r.best_phi = best_phi;
  r.phi_ball = phi_q(unit_ball(cfg.family.dimension()), cfg.q, cfg.quad).phi;
  r.gap = r.phi_ball - r.best_phi;
  r.dist_ellipsoids = dist_to_ellipsoids(r.best_set).distance;
  r.evaluations = static_cast<long>(phis.size());
  double run = kRejected;
  for (std::size_t i = 0; i < phis.size(); ++i) {
    run = std::max(run, phis[i]);
    r.trajectory.emplace_back(static_cast<long>(i), run);
  }
}

}  // namespace

SearchResult local_ascent(const SetModel& start, const SearchConfig& cfg) {
  cfg.validate();
  const std::vector<double> p = family_parameters(cfg.family, start);
  const double f = evaluate(cfg, p);
  if (f == kRejected) throw InvalidSetError("start set is outside the search family's valid range");
  Ascent a = ascend(cfg, p, f, cfg.budget - 1, cfg.seed);
  std::vector<double> phis{f};
  phis.insert(phis.end(), a.phis.begin(), a.phis.end());
  SearchResult r;
  finish(cfg, a.best, a.best_phi, phis, r);
  return r;
}

SearchResult random_probe(const SearchConfig& cfg) {
  cfg.validate();
  Rng master(cfg.seed);
  std::vector<std::uint64_t> seeds(cfg.restarts);
  for (auto& s : seeds) s = master.next();
  std::vector<std::vector<double>> params(cfg.restarts);
  std::vector<double> phis(cfg.restarts);
  parallel_for(seeds.size(), [&](std::size_t i) {
    params[i] = random_parameters(cfg.family, seeds[i]);
    phis[i] = evaluate(cfg, params[i]);
  });
  std::vector<std::size_t> order(cfg.restarts);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return phis[x] > phis[y]; });

  // Ascents run in batches from the best samples down; a batch that converges early
  // hands its unused budget to the next batch, so the whole budget is spent.
  long remaining = cfg.budget - cfg.restarts;
  std::vector<Ascent> ascents;
  std::size_t next = 0;
  while (remaining > 0 && cfg.ascents > 0) {
    const int m = static_cast<int>(std::min<std::size_t>(cfg.ascents, order.size() - next % order.size()));
    std::vector<Ascent> batch(m);
    std::vector<std::uint64_t> batch_seeds(m);
    for (auto& s : batch_seeds) s = master.next();
    parallel_for(static_cast<std::size_t>(m), [&](std::size_t j) {
      const long share = remaining / m + (static_cast<long>(j) < remaining % m ? 1 : 0);
      const std::size_t k = order[(next + j) % order.size()];
      batch[j] = ascend(cfg, params[k], phis[k], share, batch_seeds[j]);
    });
    next += m;
    for (auto& a : batch) {
      remaining -= static_cast<long>(a.phis.size());
      ascents.push_back(std::move(a));
    }
  }

  std::vector<double> all(phis);
  std::vector<double> best = params[order[0]];
  double best_phi = phis[order[0]];
  for (const auto& a : ascents) {
    all.insert(all.end(), a.phis.begin(), a.phis.end());
    if (a.best_phi > best_phi) {
      best_phi = a.best_phi;
      best = a.best;
    }
  }
  SearchResult r;
  finish(cfg, best, best_phi, all, r);
  return r;
}

std::vector<QSweepRow> q_sweep(const std::vector<double>& q_list, const SearchConfig& cfg) {
  std::vector<QSweepRow> rows;
  for (double q : q_list) {
    SearchConfig c = cfg;
    c.q = q;
    const SearchResult r = random_probe(c);
    rows.push_back({q, r.phi_ball, r.best_phi, r.gap});
  }
  return rows;
}

}  // namespace felab
