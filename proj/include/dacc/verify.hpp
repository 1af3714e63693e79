#pragma once

// Self-check suites run by `dacc verify`.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace dacc {

struct SuiteResult {
  std::string name;
  bool passed = true;
  std::string detail;  // first failing case, or a short summary
  double seconds = 0.0;
};

struct VerifyReport {
  std::vector<SuiteResult> suites;
  bool passed() const;
};

/// Stall recursion vs largest fragment over every composition of T <= 12.
SuiteResult verify_rebuffer_closed_form();
/// Greedy vs exhaustive optimum on random small instances.
SuiteResult verify_delay_optimizer(std::uint64_t seed, int instances = 500);
/// Cost minimization vs exhaustive optimum on random small instances.
SuiteResult verify_cost_optimizer(std::uint64_t seed, int instances = 200);
/// Any-k decode for all 1 <= k <= N <= 10.
SuiteResult verify_mds_roundtrip(std::uint64_t seed);
/// Simulated stalls vs closed form, with real coding, for every
/// composition of T = 10 over random paths on 20 SBSs.
SuiteResult verify_simulation(std::uint64_t seed, int paths_per_composition = 50);

VerifyReport run_verify(std::uint64_t seed);

void print_report(std::ostream& out, const VerifyReport& report);

/// Every composition (ordered partition) of n into positive parts.
std::vector<std::vector<int>> compositions(int n);

}  // namespace dacc
