#pragma once

// Cache placement under the fragment-count model.
//
// minimize_delay is the greedy steepest-descent allocation over the
// piecewise-linear relaxation of p_k * omega(T, M_k): every file starts at
// the fairness floor and the file whose next linear piece drops fastest is
// advanced one decrement point at a time. When the remaining budget cannot
// pay for the whole step, it is granted to that file as a partial step and
// the search stops. If it never has to do that, the plan sits on decrement
// points only and is optimal for the integer problem.
//
// minimize_cost trades popularity mass served by the macro cell for delay:
// the most popular files are cached at the floor, the greedy allocation is
// run over them, and the least popular cached file is evicted until the
// average delay meets the target.
//
// The brute_force_* functions enumerate every plan of small instances and
// serve as test oracles.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "dacc/core_model.hpp"
#include "dacc/delay_model.hpp"

namespace dacc {

/// Absolute tolerance for comparing popularity-weighted delays.
inline constexpr double kDelayTolerance = 1e-9;

struct OptimizerOutcome {
  CachePlan plan;
  double avg_delay = 0.0;         // sum p_k * ceil(T / M_k)
  double approx_avg_delay = 0.0;  // same sum under the linear relaxation
  bool exact_termination = true;  // every cached M_k is a decrement point
  std::int64_t budget_used = 0;   // segments
};

struct CostOutcome {
  CachePlan plan;
  std::vector<std::size_t> cached_set;
  double theta = 1.0;  // popularity mass of uncached files
  double avg_delay = 0.0;
  std::size_t evictions = 0;
};

/// Smallest level index whose delay satisfies the per-file cap:
/// D^(l) <= d_max, or D^(l) < d_max when `strict`.
/// Throws InfeasibleError if no level qualifies.
std::size_t fairness_floor_level(const DelayLevels& levels, int d_max,
                                 bool strict = false);

/// Fills in the derived fields of an outcome for `plan`.
OptimizerOutcome summarize_plan(CachePlan plan, std::span<const double> popularity,
                                const DelayLevels& levels);

CostOutcome summarize_cost(CachePlan plan, std::span<const double> popularity,
                           const DelayLevels& levels, std::size_t evictions = 0);

/// Greedy delay minimization over all files. `budget` is in segments and
/// must cover K floors; otherwise InfeasibleError carries the deficit.
OptimizerOutcome minimize_delay(std::span<const double> popularity,
                                const DelayLevels& levels, std::int64_t budget,
                                std::size_t floor_level);

/// Same, restricted to the `cached_files` most popular files; the rest are
/// left uncached.
OptimizerOutcome minimize_delay(std::span<const double> popularity,
                                const DelayLevels& levels, std::int64_t budget,
                                std::size_t floor_level, std::size_t cached_files);

/// Extra segments that would let the interrupted partial step reach its
/// decrement point; 0 when the outcome is exact.
std::int64_t epsilon_pad(const OptimizerOutcome& outcome, const DelayLevels& levels);

/// Delay-constrained cost minimization with least-popular eviction.
/// Throws InfeasibleError when the budget holds no floor or when even a
/// single cached file misses `d_avg_max`.
CostOutcome minimize_cost(std::span<const double> popularity, const DelayLevels& levels,
                          std::int64_t budget, std::size_t floor_level,
                          double d_avg_max);

/// Exact minimizer of the average delay by enumeration; ties go to the
/// lexicographically smallest plan. Limited to K <= 6 and budget <= 40.
OptimizerOutcome brute_force_delay_min(std::span<const double> popularity,
                                       const DelayLevels& levels, std::int64_t budget,
                                       std::size_t floor_level);

/// Exact minimizer of the uncached mass subject to the average delay cap,
/// then of the delay among equal-cost plans. Same size limits.
CostOutcome brute_force_cost_min(std::span<const double> popularity,
                                 const DelayLevels& levels, std::int64_t budget,
                                 std::size_t floor_level, double d_avg_max);

}  // namespace dacc
