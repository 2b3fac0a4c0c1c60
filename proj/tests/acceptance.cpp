#include <iostream>

#include "jetcalc/acceptance.hpp"

int main() {
  bool ok = jetcalc::acceptance::runSuite(std::cout);
  std::cout << (ok ? "ACCEPTANCE PASS" : "ACCEPTANCE FAIL") << std::endl;
  return ok ? 0 : 1;
}
