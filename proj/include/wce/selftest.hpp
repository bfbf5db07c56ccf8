#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "wce/instance.hpp"
#include "wce/rng.hpp"

namespace wce {

struct SelftestOptions {
  std::uint64_t seed = 42;
  int trials = 100;
  int max_n = 6;
  double tol = 1e-9;
  int workers = 1;
};

struct SuiteResult {
  std::string name;
  long long cases = 0;
  long long failures = 0;
  double max_residual = 0.0;
  std::vector<std::string> notes;
};

struct SelftestReport {
  std::vector<SuiteResult> suites;
  long long total_cases = 0;
  long long total_failures = 0;
  bool passed = false;
};

// Random problem instances: weights uniform on [0.1, 2], weight-function
// values with independent real and imaginary parts on [-1, 1], exact zeros
// planted with the given probability, and a uniformly random base partition.
Instance random_instance(Rng& rng, int max_n, double zero_probability);

// Same, but redrawn until the averaged squared weight is nonzero everywhere.
Instance random_full_support_instance(Rng& rng, int max_n);

SelftestReport run_selftest(const SelftestOptions& options);

}  // namespace wce
