#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace felab {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

// Runs criteria 1..15 (the Babenko count, 7, last so it covers every evaluation) and
// prints one "PASS"/"FAIL" line per criterion to `out` as each finishes.
std::vector<CriterionResult> run_acceptance(std::ostream& out);

}  // namespace felab
