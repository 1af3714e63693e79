#pragma once

// Slot-level simulation of one video downloading session under high
// mobility. Slot s covers the interval [s, s + 1). During each of the first
// T slots the user is attached to a different SBS and downloads that SBS's
// coded segment of the fragment currently in download (fragments are
// fetched in order). A fragment decodes at the end of the slot that
// delivers its k-th share. The player shows one segment per slot and stalls
// whenever the next segment's fragment was not decoded by the start of the
// slot.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "dacc/core_model.hpp"
#include "dacc/erasure_coding.hpp"

namespace dacc {

struct MobilityPath {
  std::vector<int> sbs_sequence;  // 1-based SBS indices, all distinct

  std::size_t size() const { return sbs_sequence.size(); }
};

/// T distinct SBSs drawn uniformly without replacement from 1..N.
/// Throws InfeasibleError when N < T.
MobilityPath generate_path(int N, int T, std::mt19937_64& rng);

enum class PlayerAction { Rebuffer, Display };

struct SlotRecord {
  int slot = 0;
  std::optional<int> sbs;              // serving SBS, none after the download
  std::optional<int> fragment;         // fragment whose share arrived (0-based)
  std::vector<int> decoded;            // fragments decoded at the end of the slot
  PlayerAction action = PlayerAction::Rebuffer;
  int segment = 0;                     // 0-based segment shown or awaited
};

struct SessionTrace {
  std::vector<SlotRecord> slots;
  std::vector<int> deltas;                  // stall slots charged to each fragment
  int cumulative = 0;                       // total stall slots
  std::vector<std::vector<int>> share_sources;  // SBS indices per fragment
  Bytes original;                           // empty unless real coding ran
  Bytes displayed;                          // concatenated decoded segments
};

struct SessionOptions {
  bool real_coding = false;
  std::int64_t segment_bits = 8;  // B; must be a multiple of 8 for real coding
  std::uint64_t payload_seed = 1;
  int N = 0;                      // SBS count; 0 means the largest path index
};

/// Runs one session. Throws std::invalid_argument when the path length
/// differs from the segment count or B is not byte aligned for real coding.
SessionTrace simulate_session(const FragmentationPlan& plan, const MobilityPath& path,
                              const SessionOptions& options = {});

struct DelayStats {
  double mean = 0.0;
  int min = 0;
  int max = 0;
  std::size_t trials = 0;
};

/// Repeats simulate_session over independent random paths. Each trial draws
/// its own seed from `rng`. The measured delay must equal the closed form on
/// every path; a mismatch throws std::logic_error.
DelayStats monte_carlo_delay(const FragmentationPlan& plan, int N, std::size_t trials,
                             std::mt19937_64& rng, const SessionOptions& options = {});

/// One event per line: `<slot> <sbs|-> <action>`, where action is
/// `recv f<i>`, `decode f<i>`, `show s<j>` or `stall s<j>`.
void write_trace(std::ostream& out, const SessionTrace& trace);

}  // namespace dacc
