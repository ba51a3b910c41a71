#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "felab/quadrature.hpp"
#include "felab/set_model.hpp"

namespace felab {

enum class FamilyKind { interval_unions, star_modes };

// interval_unions(k): k intervals, parameters (center, log width) each, d = 1.
// star_modes(N): r = 1 + sum_{n<=N} a_n cos n t + b_n sin n t, d = 2.
struct Family {
  FamilyKind kind = FamilyKind::interval_unions;
  int size = 2;

  int dimension() const { return kind == FamilyKind::interval_unions ? 1 : 2; }
  int parameters() const { return 2 * size; }
  // "intervals:k" or "star:N"
  static Family parse(const std::string& spec);
  std::string name() const;
};

struct SearchConfig {
  double q = 4.0;
  Family family;
  int restarts = 20;
  std::uint64_t seed = 1;
  double initial_step = 0.05;
  double step_decay = 0.5;
  double min_step = 1e-6;
  long budget = 200;  // total Phi evaluations
  int ascents = 3;    // random_probe refines this many of the best samples
  // Simulated annealing temperature; 0 keeps the ascent strictly monotone.
  double anneal_temperature = 0.0;
  QuadratureConfig quad;

  void validate() const;
};

struct SearchResult {
  SetModel best_set;
  double best_phi = 0.0;
  double phi_ball = 0.0;
  double gap = 0.0;  // phi_ball - best_phi
  double dist_ellipsoids = 0.0;
  long evaluations = 0;
  // (evaluation index, best phi so far)
  std::vector<std::pair<long, double>> trajectory;
};

// Family members of measure |B|; parameters outside the valid range throw InvalidSetError.
SetModel family_member(const Family& f, const std::vector<double>& params);
std::vector<double> family_parameters(const Family& f, const SetModel& E);
std::vector<double> random_parameters(const Family& f, std::uint64_t seed);

// Default quadrature for search evaluations: cutoff 8 in d = 2 keeps Phi within ~1e-9.
QuadratureConfig search_quadrature(int d);

SearchResult local_ascent(const SetModel& start, const SearchConfig& cfg);
SearchResult random_probe(const SearchConfig& cfg);

struct QSweepRow {
  double q = 0.0;
  double phi_ball = 0.0;
  double best_phi = 0.0;
  double gap = 0.0;
};

std::vector<QSweepRow> q_sweep(const std::vector<double>& q_list, const SearchConfig& cfg);

}  // namespace felab
