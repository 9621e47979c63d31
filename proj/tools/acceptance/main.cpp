// Prints one line per acceptance criterion; exit status 0 iff all pass.
// Optional arguments: criterion ids to run.
#include <cstdlib>
#include <iostream>
#include <string>

#include "acceptance.hpp"

int main(int argc, char** argv) {
  using namespace liberation::acceptance;
  Options options;
  for (int i = 1; i < argc; ++i) options.only.insert(std::atoi(argv[i]));

  int run = 0;
  int passed = 0;
  for (int id = 1; id <= kCriterionCount; ++id) {
    if (!options.only.empty() && options.only.count(id) == 0) continue;
    const Result r = run_one(id, options);
    std::cout << format_line(r) << std::endl;
    ++run;
    passed += r.passed ? 1 : 0;
  }
  std::cout << passed << '/' << run << " criteria passed\n";
  return passed == run ? 0 : 1;
}
