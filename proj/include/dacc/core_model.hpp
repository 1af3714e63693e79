#pragma once

// System-model types shared by every other module: the SBS network
// configuration, the popularity-ranked video library, per-file fragment
// layouts and the fragment-count cache plan.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace dacc {

/// Raised when an instance has no feasible solution (e.g. the cache cannot
/// hold the per-file floor). `deficit` is the number of missing segments,
/// or 0 when the shortfall is not measured in segments.
class InfeasibleError : public std::runtime_error {
 public:
  InfeasibleError(const std::string& what, std::int64_t deficit = 0)
      : std::runtime_error(what), deficit_(deficit) {}
  std::int64_t deficit() const noexcept { return deficit_; }

 private:
  std::int64_t deficit_;
};

/// Network and library parameters. Sizes are in bits, durations in slots.
struct SystemConfig {
  int N = 1;                 // SBS count
  int K = 1;                 // files in the library
  std::int64_t F = 8;        // file size
  std::int64_t B = 8;        // bits delivered (and displayed) per slot
  int T = 1;                 // slots per downloading session, F = T*B
  std::int64_t lambda = 8;   // display rate, identified with B
  std::int64_t C = 0;        // per-SBS cache capacity
  double w = 0.0;            // Zipf skewness
  int D_max = 1;             // per-file cumulative delay cap
  std::optional<double> D_avgMax;
  std::uint64_t seed = 1;

  /// Throws std::invalid_argument on the first violated invariant.
  void validate() const;

  /// Cache capacity in whole coded segments, floor(C / B).
  std::int64_t segment_budget() const { return C / B; }
};

/// Request probabilities p_1 >= p_2 >= ... >= p_K > 0 summing to one.
class VideoLibrary {
 public:
  /// Validates ordering, positivity and normalization (tolerance 1e-12).
  explicit VideoLibrary(std::vector<double> popularity);

  static VideoLibrary zipf(std::size_t K, double w);

  std::span<const double> popularity() const { return p_; }
  std::size_t size() const { return p_.size(); }
  double operator[](std::size_t k) const { return p_[k]; }

 private:
  std::vector<double> p_;
};

/// p_k = k^-w / sum_j j^-w for k = 1..K.
std::vector<double> zipf_popularity(std::size_t K, double w);

/// How one file's T segments are grouped into consecutive fragments.
struct FragmentationPlan {
  std::size_t file = 0;
  std::vector<int> fragment_sizes;  // segments per fragment, in display order

  int segments() const;
  int fragments() const { return static_cast<int>(fragment_sizes.size()); }
};

/// Splits T segments into M near-equal fragments. The T mod M fragments
/// holding one extra segment come last.
std::vector<int> make_fragmentation(int T, int M);

/// Fragment counts per file; M_k = 0 means file k is not cached.
struct CachePlan {
  std::vector<int> M;

  std::size_t size() const { return M.size(); }
  bool cached(std::size_t k) const { return M[k] > 0; }
  std::int64_t segments_used() const;
  std::vector<std::size_t> cached_set() const;
};

/// Per-SBS memory consumed by a plan: one B-bit coded segment per fragment.
std::int64_t plan_cache_bits(const CachePlan& plan, std::int64_t B);

/// Sum of p_k over files the plan leaves uncached (the MBS load).
/// Summed from the least popular file upwards.
double uncached_mass(const CachePlan& plan, std::span<const double> popularity);

}  // namespace dacc
