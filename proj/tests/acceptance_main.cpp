// Prints one PASS/FAIL line per acceptance criterion.
// Exit status 0 when every criterion passes, or, with --expect-fail a,b,..., when exactly the
// listed criteria fail. Any other outcome (a new failure or an unexpected pass) exits 1.

#include <iostream>
#include <set>
#include <sstream>
#include <string>

#include "acceptance.hpp"

int main(int argc, char** argv) {
  std::set<int> expected;
  for (int k = 1; k < argc; ++k) {
    const std::string arg = argv[k];
    if (arg == "--expect-fail" && k + 1 < argc) {
      std::istringstream is(argv[++k]);
      std::string id;
      while (std::getline(is, id, ',')) expected.insert(std::stoi(id));
    } else {
      std::cerr << "usage: svanish_acceptance [--expect-fail 1,3]\n";
      return 2;
    }
  }

  std::set<int> failed;
  for (const auto& r : svanish::acceptance::run_all()) {
    std::cout << svanish::acceptance::format_line(r) << '\n';
    if (!r.passed) failed.insert(r.id);
  }
  std::cout << std::flush;

  if (failed == expected) return 0;
  for (int id : failed) {
    if (!expected.count(id)) std::cerr << "criterion " << id << " failed unexpectedly\n";
  }
  for (int id : expected) {
    if (!failed.count(id)) std::cerr << "criterion " << id << " passed but is listed as failing; update the expectation\n";
  }
  return 1;
}
