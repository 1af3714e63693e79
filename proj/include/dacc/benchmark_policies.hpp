#pragma once

// Reference placements the optimizer is compared against.
//
//  MPFC  most popular file caching: after the fairness floor, files are
//        raised to full caching (M = T) in popularity order.
//  EFC   equal file caching: after the floor, round-robin passes in
//        popularity order move each file to its next decrement point.
//
// The *_cost variants cache the most popular files at the floor, apply the
// policy to the cached set and evict the least popular cached file until
// the average delay meets the cap.

#include <cstddef>
#include <cstdint>
#include <span>

#include "dacc/core_model.hpp"
#include "dacc/delay_model.hpp"
#include "dacc/placement_optimizer.hpp"

namespace dacc {

OptimizerOutcome mpfc_delay(std::span<const double> popularity, const DelayLevels& levels,
                            std::int64_t budget, std::size_t floor_level);

OptimizerOutcome efc_delay(std::span<const double> popularity, const DelayLevels& levels,
                           std::int64_t budget, std::size_t floor_level);

/// Plans for the `cached_files` most popular files only.
CachePlan mpfc_allocate(std::size_t files, const DelayLevels& levels, std::int64_t budget,
                        std::size_t floor_level, std::size_t cached_files);
CachePlan efc_allocate(std::size_t files, const DelayLevels& levels, std::int64_t budget,
                       std::size_t floor_level, std::size_t cached_files);

CostOutcome mpfc_cost(std::span<const double> popularity, const DelayLevels& levels,
                      std::int64_t budget, std::size_t floor_level, double d_avg_max);

CostOutcome efc_cost(std::span<const double> popularity, const DelayLevels& levels,
                     std::int64_t budget, std::size_t floor_level, double d_avg_max);

}  // namespace dacc
