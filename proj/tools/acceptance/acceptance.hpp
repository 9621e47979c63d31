#pragma once

#include <cstddef>
#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "liberation/bridge.hpp"

namespace liberation::acceptance {

inline constexpr int kCriterionCount = 13;

struct Options {
  std::set<int> only;             // empty: every criterion
  BinomialRelation relation;      // altered only to check that the suite notices
  std::size_t threads = 0;        // Monte Carlo workers, 0: hardware concurrency
  std::uint64_t seed = 20240607;  // Monte Carlo and random parameter draws
};

struct Result {
  int id = 0;
  std::string name;
  bool passed = false;
  double measured = 0.0;   // the headline quantity
  double tolerance = 0.0;  // what it is compared against
  std::string detail;      // secondary conditions and where the worst case sits
  double seconds = 0.0;
};

/// Runs the selected criteria in order. A criterion that throws is reported
/// as failed with the exception text in `detail`.
std::vector<Result> run(const Options& options = {});
Result run_one(int id, const Options& options = {});

/// One line: "[PASS] 4  free convolution ... : 3.1e-15 (tol 1e-10) ...".
std::string format_line(const Result& r);
void to_json(nlohmann::json& j, const Result& r);

}  // namespace liberation::acceptance
