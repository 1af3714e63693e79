#include "dacc/benchmark_policies.hpp"

#include <algorithm>
#include <string>
#include <vector>

#include "eviction_search.hpp"

namespace dacc {

namespace {

void require_floor_budget(std::size_t files, const DelayLevels& levels,
                          std::int64_t budget, std::size_t floor_level) {
  const std::int64_t need =
      static_cast<std::int64_t>(files) * levels.fragments(floor_level);
  if (budget < need)
    throw InfeasibleError("cache budget of " + std::to_string(budget) +
                              " segments cannot hold the per-file floor of " +
                              std::to_string(need),
                          need - budget);
}

std::size_t floor_capacity(std::span<const double> popularity, const DelayLevels& levels,
                           std::int64_t budget, std::size_t floor_level) {
  if (floor_level >= levels.size()) throw std::out_of_range("floor level out of range");
  const int floor_m = levels.fragments(floor_level);
  if (budget < floor_m)
    throw InfeasibleError("cache budget cannot hold a single file at the floor",
                          floor_m - budget);
  return std::min<std::size_t>(static_cast<std::size_t>(budget / floor_m),
                               popularity.size());
}

std::vector<double> prefix_mass(std::span<const double> popularity, std::size_t n) {
  std::vector<double> mass(n + 1, 0.0);
  for (std::size_t k = 0; k < n; ++k) mass[k + 1] = mass[k] + popularity[k];
  return mass;
}

}  // namespace

CachePlan mpfc_allocate(std::size_t files, const DelayLevels& levels, std::int64_t budget,
                        std::size_t floor_level, std::size_t cached_files) {
  require_floor_budget(cached_files, levels, budget, floor_level);
  const int T = levels.slots();
  const int floor_m = levels.fragments(floor_level);
  CachePlan plan{std::vector<int>(files, 0)};
  std::fill_n(plan.M.begin(), cached_files, floor_m);
  std::int64_t remaining = budget - static_cast<std::int64_t>(cached_files) * floor_m;
  for (std::size_t k = 0; k < cached_files && remaining > 0; ++k) {
    const int raise = static_cast<int>(std::min<std::int64_t>(T - plan.M[k], remaining));
    plan.M[k] += raise;
    remaining -= raise;
  }
  return plan;
}

CachePlan efc_allocate(std::size_t files, const DelayLevels& levels, std::int64_t budget,
                       std::size_t floor_level, std::size_t cached_files) {
  require_floor_budget(cached_files, levels, budget, floor_level);
  const std::size_t last = levels.size() - 1;
  CachePlan plan{std::vector<int>(files, 0)};
  std::vector<std::size_t> level(cached_files, floor_level);
  std::fill_n(plan.M.begin(), cached_files, levels.fragments(floor_level));
  std::int64_t remaining =
      budget - static_cast<std::int64_t>(cached_files) * levels.fragments(floor_level);

  bool advanced = true;
  while (remaining > 0 && advanced) {
    advanced = false;
    for (std::size_t k = 0; k < cached_files && remaining > 0; ++k) {
      if (level[k] == last) continue;
      const int step = levels.fragments(level[k] + 1) - plan.M[k];
      if (remaining >= step) {
        ++level[k];
        plan.M[k] = levels.fragments(level[k]);
        remaining -= step;
        advanced = true;
      } else {
        plan.M[k] += static_cast<int>(remaining);
        remaining = 0;
      }
    }
  }
  return plan;
}

OptimizerOutcome mpfc_delay(std::span<const double> popularity, const DelayLevels& levels,
                            std::int64_t budget, std::size_t floor_level) {
  return summarize_plan(mpfc_allocate(popularity.size(), levels, budget, floor_level,
                                      popularity.size()),
                        popularity, levels);
}

OptimizerOutcome efc_delay(std::span<const double> popularity, const DelayLevels& levels,
                           std::int64_t budget, std::size_t floor_level) {
  return summarize_plan(efc_allocate(popularity.size(), levels, budget, floor_level,
                                     popularity.size()),
                        popularity, levels);
}

CostOutcome mpfc_cost(std::span<const double> popularity, const DelayLevels& levels,
                      std::int64_t budget, std::size_t floor_level, double d_avg_max) {
  const std::size_t start = floor_capacity(popularity, levels, budget, floor_level);
  const auto mass = prefix_mass(popularity, start);
  const int T = levels.slots();
  const int floor_m = levels.fragments(floor_level);
  const int floor_d = levels.delay(floor_level);
  const std::int64_t raise = T - floor_m;

  // files 0..q-1 full, file q partially raised, the rest at the floor
  auto estimate = [&](std::size_t n) {
    const std::int64_t spare = budget - static_cast<std::int64_t>(n) * floor_m;
    if (raise == 0) return mass[n] * floor_d;
    const std::size_t q = static_cast<std::size_t>(
        std::min<std::int64_t>(static_cast<std::int64_t>(n), spare / raise));
    if (q == n) return mass[n];
    const std::int64_t left = spare - static_cast<std::int64_t>(q) * raise;
    const int d_q = left > 0 ? omega(T, floor_m + static_cast<int>(left)) : floor_d;
    return mass[q] + popularity[q] * d_q + (mass[n] - mass[q + 1]) * floor_d;
  };
  auto allocate = [&](std::size_t n) {
    return mpfc_allocate(popularity.size(), levels, budget, floor_level, n);
  };
  return detail::evict_until(popularity, levels, start, d_avg_max, estimate, allocate);
}

CostOutcome efc_cost(std::span<const double> popularity, const DelayLevels& levels,
                     std::int64_t budget, std::size_t floor_level, double d_avg_max) {
  const std::size_t start = floor_capacity(popularity, levels, budget, floor_level);
  const auto mass = prefix_mass(popularity, start);
  const int T = levels.slots();
  const std::size_t last = levels.size() - 1;

  // whole passes lift every cached file one level; the final pass stops at
  // file q, which gets the leftover
  auto estimate = [&](std::size_t n) {
    std::int64_t spare =
        budget - static_cast<std::int64_t>(n) * levels.fragments(floor_level);
    std::size_t l = floor_level;
    while (l < last) {
      const std::int64_t pass = static_cast<std::int64_t>(n) * levels.step(l);
      if (spare < pass) break;
      spare -= pass;
      ++l;
    }
    if (l == last || spare == 0) return mass[n] * levels.delay(l);
    const std::int64_t step = levels.step(l);
    const auto q = static_cast<std::size_t>(spare / step);
    const std::int64_t left = spare % step;
    const int d_q =
        left > 0 ? omega(T, levels.fragments(l) + static_cast<int>(left)) : levels.delay(l);
    return mass[q] * levels.delay(l + 1) + popularity[q] * d_q +
           (mass[n] - mass[q + 1]) * levels.delay(l);
  };
  auto allocate = [&](std::size_t n) {
    return efc_allocate(popularity.size(), levels, budget, floor_level, n);
  };
  return detail::evict_until(popularity, levels, start, d_avg_max, estimate, allocate);
}

}  // namespace dacc
