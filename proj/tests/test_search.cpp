#include <doctest.h>

#include <cmath>

#include "felab/errors.hpp"
#include "felab/functional.hpp"
#include "felab/search.hpp"

using namespace felab;

namespace {

SearchConfig small_config(const std::string& family, double q) {
  SearchConfig c;
  c.q = q;
  c.family = Family::parse(family);
  c.restarts = 10;
  c.budget = 120;
  c.ascents = 2;
  c.seed = 5;
  c.quad = search_quadrature(c.family.dimension());
  return c;
}

}  // namespace

TEST_CASE("family parsing") {
  const auto f = Family::parse("intervals:3");
  CHECK(f.kind == FamilyKind::interval_unions);
  CHECK(f.parameters() == 6);
  CHECK(f.name() == "intervals:3");
  CHECK(Family::parse("star:5").dimension() == 2);
  CHECK_THROWS_AS(Family::parse("intervals:9"), DomainError);
  CHECK_THROWS_AS(Family::parse("blob:2"), DomainError);
}

TEST_CASE("family members are normalized and round-trip through parameters") {
  const auto f = Family::parse("intervals:3");
  for (std::uint64_t s = 1; s <= 5; ++s) {
    const auto p = random_parameters(f, s);
    CHECK(measure(family_member(f, p)) == doctest::Approx(2.0));
  }
  const auto st = Family::parse("star:4");
  const auto p = random_parameters(st, 3);
  const SetModel E = family_member(st, p);
  CHECK(measure(E) == doctest::Approx(kPi).epsilon(1e-12));
  const auto back = family_parameters(st, E);
  CHECK(measure(family_member(st, back)) == doctest::Approx(kPi).epsilon(1e-12));
  CHECK_THROWS_AS(family_member(st, {1.0}), ArityError);
  CHECK_THROWS_AS(family_member(st, {0.99, 0, 0, 0, 0, 0, 0, 0}), InvalidSetError);
}

TEST_CASE("random probes are reproducible and never beat the ball") {
  const auto c = small_config("intervals:3", 4.0);
  const auto a = random_probe(c), b = random_probe(c);
  CHECK(a.best_phi == b.best_phi);
  CHECK(a.evaluations == c.budget);
  CHECK(a.best_phi <= a.phi_ball + 1e-9);
  CHECK(a.gap == doctest::Approx(a.phi_ball - a.best_phi));
  REQUIRE(a.trajectory.size() == static_cast<std::size_t>(c.budget));
  for (std::size_t i = 1; i < a.trajectory.size(); ++i) CHECK(a.trajectory[i].second >= a.trajectory[i - 1].second);
  CHECK(a.trajectory.back().second == a.best_phi);
}

TEST_CASE("local ascent from the ball stays at the ball") {
  auto c = small_config("intervals:2", 6.0);
  c.budget = 60;
  const auto r = local_ascent(unit_ball(1), c);
  CHECK(r.gap >= -1e-9);
  CHECK(r.gap < 1e-9);
  CHECK(r.evaluations == 60);
}

TEST_CASE("annealing keeps the best-so-far bookkeeping monotone") {
  auto c = small_config("intervals:2", 4.0);
  c.anneal_temperature = 1e-3;
  const auto r = random_probe(c);
  CHECK(r.best_phi <= r.phi_ball + 1e-9);
  CHECK(r.trajectory.back().second == r.best_phi);
}

TEST_CASE("star probe in d = 2") {
  auto c = small_config("star:2", 4.0);
  c.restarts = 4;
  c.budget = 16;
  const auto r = random_probe(c);
  CHECK(r.evaluations == 16);
  CHECK(r.best_phi <= r.phi_ball + 1e-6);
  CHECK(r.dist_ellipsoids >= 0.0);
}

TEST_CASE("configuration checks and the q sweep") {
  auto c = small_config("intervals:2", 4.0);
  c.budget = 5;
  CHECK_THROWS_AS(random_probe(c), DomainError);
  c = small_config("intervals:2", 4.0);
  c.q = 2.0;
  CHECK_THROWS_AS(c.validate(), DomainError);
  c = small_config("intervals:2", 4.0);
  c.budget = 40;
  const auto rows = q_sweep({4.0, 5.0}, c);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].best_phi == random_probe(c).best_phi);
  for (const auto& r : rows) CHECK(r.gap >= -1e-9);
}
