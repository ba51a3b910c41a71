#include <iostream>

#include "felab/acceptance.hpp"

int main() {
  bool ok = true;
  for (const auto& r : felab::run_acceptance(std::cout)) ok = ok && r.pass;
  return ok ? 0 : 1;
}
