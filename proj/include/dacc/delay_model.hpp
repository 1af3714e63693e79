#pragma once

// Re-buffering delay model for in-order fragment download at one segment
// per slot while displaying one segment per slot.

#include <cstddef>
#include <span>
#include <vector>

#include "dacc/core_model.hpp"

namespace dacc {

struct RebufferResult {
  std::vector<int> deltas;  // stall before each fragment starts playing
  int cumulative = 0;       // sum of deltas
};

/// Per-fragment stalls via the running-sum recursion
///   delta_m = max(d_m - sum_{i<m} delta_i, 0).
/// Throws std::domain_error on an empty list or a non-positive size.
RebufferResult rebuffer_sequence(std::span<const int> fragment_sizes);

/// Same quantity from the explicit timeline: download-complete instants
/// t_d(m) = sum_{i<=m} d_i and playback-start instants
/// t_p(m) = sum_{i<m} (delta_i + d_i), delta_m = max(t_d - t_p, 0).
RebufferResult rebuffer_timeline(std::span<const int> fragment_sizes);

/// Cumulative stall time, which equals the largest fragment size.
int cumulative_delay(std::span<const int> fragment_sizes);

/// Minimum achievable cumulative delay with M fragments: ceil(T / M).
int omega(int T, int M);

struct DelayLevel {
  int delay;      // D^(l)
  int fragments;  // m^(l), smallest M with omega(T, M) == delay
};

/// The distinct values of omega(T, .) with their decrement points, ordered
/// by decreasing delay. Level indices are 0-based throughout the library.
class DelayLevels {
 public:
  explicit DelayLevels(int T);

  int slots() const { return T_; }
  std::size_t size() const { return levels_.size(); }
  const DelayLevel& operator[](std::size_t l) const { return levels_[l]; }
  std::span<const DelayLevel> levels() const { return levels_; }

  int delay(std::size_t l) const { return levels_[l].delay; }
  int fragments(std::size_t l) const { return levels_[l].fragments; }

  /// Segments needed to move from level l to l + 1.
  int step(std::size_t l) const;

  /// True when M is the decrement point of some level.
  bool is_decrement_point(int M) const;

  /// Largest l with fragments(l) <= M (M in [1, T]).
  std::size_t level_at(int M) const;

 private:
  int T_;
  std::vector<DelayLevel> levels_;
};

inline DelayLevels delay_levels(int T) { return DelayLevels(T); }

/// Popularity-weighted slope of the linear piece between decrement points
/// l and l + 1. Throws std::out_of_range for the last level.
double slope(double p, const DelayLevels& levels, std::size_t l);

/// Linear interpolation of p * omega through the decrement points.
/// Throws std::out_of_range when M lies outside [1, T].
double piecewise_delay(double p, const DelayLevels& levels, int M);

/// sum_k p_k * omega(T, M_k) over cached files; uncached files add nothing.
double average_delay(const CachePlan& plan, std::span<const double> popularity, int T);

/// average_delay divided by the popularity mass of the cached files.
/// Reporting only; returns 0 for an empty cache.
double normalized_average_delay(const CachePlan& plan,
                                std::span<const double> popularity, int T);

}  // namespace dacc
