#include "felab/io.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>

#include "felab/errors.hpp"

namespace felab {

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

json affine_to_json(const AffineMap& T) {
  if (T.d == 1) return {{"matrix", {{T.A[0]}}}, {"translation", {T.v[0]}}};
  return {{"matrix", {{T.A[0], T.A[1]}, {T.A[2], T.A[3]}}}, {"translation", {T.v[0], T.v[1]}}};
}

AffineMap affine_from_json(const json& j, int d) {
  AffineMap T = AffineMap::identity(d);
  const json& m = j.at("matrix");
  const json& v = j.at("translation");
  if (d == 1) {
    T.A[0] = m.at(0).at(0).get<double>();
    T.v[0] = v.at(0).get<double>();
    return T;
  }
  T.A = {m.at(0).at(0).get<double>(), m.at(0).at(1).get<double>(), m.at(1).at(0).get<double>(),
         m.at(1).at(1).get<double>()};
  T.v = {v.at(0).get<double>(), v.at(1).get<double>()};
  return T;
}

json set_to_json(const SetModel& E) {
  if (const auto* iv = std::get_if<IntervalSet>(&E)) {
    json list = json::array();
    for (const auto& [l, r] : iv->intervals()) list.push_back({l, r});
    return {{"dimension", 1}, {"kind", "intervals"}, {"intervals", list}};
  }
  const auto& s = std::get<StarSet>(E);
  return {{"dimension", 2},
          {"kind", "star"},
          {"center", {s.center()[0], s.center()[1]}},
          {"fourier", {{"c0", s.c0()}, {"a", s.a()}, {"b", s.b()}}},
          {"affine", affine_to_json(s.affine())}};
}

SetModel set_from_json(const json& j) {
  try {
    const std::string kind = j.at("kind").get<std::string>();
    const int d = j.value("dimension", kind == "intervals" ? 1 : 2);
    if (kind == "intervals") {
      if (d != 1) throw InvalidSetError("interval sets must have dimension 1");
      std::vector<std::pair<double, double>> iv;
      for (const auto& p : j.at("intervals")) iv.emplace_back(p.at(0).get<double>(), p.at(1).get<double>());
      return IntervalSet(iv);
    }
    if (kind == "star") {
      if (d != 2) throw CapabilityError("star sets are supported in dimension 2 only");
      const json& f = j.at("fourier");
      std::array<double, 2> c{0.0, 0.0};
      if (j.contains("center")) c = {j["center"].at(0).get<double>(), j["center"].at(1).get<double>()};
      AffineMap T = AffineMap::identity(2);
      if (j.contains("affine")) T = affine_from_json(j["affine"], 2);
      return StarSet(c, f.at("c0").get<double>(), f.value("a", std::vector<double>{}),
                     f.value("b", std::vector<double>{}), T);
    }
    throw InvalidSetError("unknown set kind '" + kind + "'");
  } catch (const json::exception& e) {
    throw InvalidSetError(std::string("malformed set document: ") + e.what());
  }
}

SetModel read_set_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open set file '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw InvalidSetError("set file '" + path + "' is not valid JSON: " + e.what());
  }
  return set_from_json(j);
}

void write_set_file(const std::string& path, const SetModel& E) {
  std::ofstream out(path);
  if (!out) throw DomainError("cannot write set file '" + path + "'");
  out << set_to_json(E).dump(2) << '\n';
}

json config_to_json(const QuadratureConfig& cfg) {
  return {{"abs_tol", cfg.abs_tol},
          {"rel_tol", cfg.rel_tol},
          {"max_subdivisions", cfg.max_subdivisions},
          {"oscillatory_tail_terms", cfg.oscillatory_tail_terms}};
}

void write_csv_row(std::ostream& os, const std::vector<double>& row) {
  for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << fmt17(row[i]);
  os << '\n';
}

}  // namespace felab
