#pragma once

#include <cstddef>
#include <span>
#include <string>

#include "dacc/placement_optimizer.hpp"

namespace dacc::detail {

// Margin under which a fast estimate is confirmed by a full allocation.
// Estimates differ from the direct sum only by rounding.
inline constexpr double kEstimateMargin = 1e-6;

// Least-popular-first eviction shared by the cost-minimizing policies.
// Keeps the `n` most popular files cached for n = start, start - 1, ..., 1
// and returns the first allocation meeting `d_avg_max`. `estimate(n)` is
// called with strictly decreasing n and may keep state between calls;
// `allocate(n)` returns the policy's plan for the top-n files.
template <class Estimate, class Allocate>
CostOutcome evict_until(std::span<const double> popularity, const DelayLevels& levels,
                        std::size_t start, double d_avg_max, Estimate&& estimate,
                        Allocate&& allocate) {
  for (std::size_t n = start; n >= 1; --n) {
    if (estimate(n) > d_avg_max + kEstimateMargin) continue;
    CachePlan plan = allocate(n);
    const double d = average_delay(plan, popularity, levels.slots());
    if (d <= d_avg_max + kDelayTolerance)
      return summarize_cost(std::move(plan), popularity, levels, start - n);
  }
  throw InfeasibleError("average delay cap " + std::to_string(d_avg_max) +
                        " is unreachable even with a single cached file");
}

}  // namespace dacc::detail
