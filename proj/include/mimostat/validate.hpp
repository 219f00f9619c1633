#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace mimostat::validate {

struct CheckResult {
  std::string name;
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct Options {
  double tolScale = 1.0;        // scales every tolerance
  long long mcSamples = 20000;  // Monte Carlo sample count for the sampled checks
  std::uint64_t seed = 20240314;
  bool mutateDensitySign = false;  // deliberate-fault harness
};

/// Runs the full invariant suite (group-theory identities, special-function
/// cross-checks, density normalization/nonnegativity, mgf consistency).
std::vector<CheckResult> runAll(const Options& opts);

/// Prints one pass/fail line per check; returns 0 iff all pass.
int runValidate(const Options& opts, std::ostream& out);

}  // namespace mimostat::validate
