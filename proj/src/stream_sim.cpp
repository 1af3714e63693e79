#include "dacc/stream_sim.hpp"

#include <algorithm>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>

#include "dacc/delay_model.hpp"

namespace dacc {

MobilityPath generate_path(int N, int T, std::mt19937_64& rng) {
  if (T < 1) throw std::invalid_argument("path length must be >= 1");
  if (N < T)
    throw InfeasibleError("a high-mobility path of " + std::to_string(T) +
                          " slots needs at least as many SBSs, have " + std::to_string(N));
  std::vector<int> pool(static_cast<std::size_t>(N));
  for (int i = 0; i < N; ++i) pool[static_cast<std::size_t>(i)] = i + 1;
  // partial Fisher-Yates
  for (int i = 0; i < T; ++i) {
    std::uniform_int_distribution<int> pick(i, N - 1);
    std::swap(pool[static_cast<std::size_t>(i)],
              pool[static_cast<std::size_t>(pick(rng))]);
  }
  pool.resize(static_cast<std::size_t>(T));
  return MobilityPath{std::move(pool)};
}

SessionTrace simulate_session(const FragmentationPlan& plan, const MobilityPath& path,
                              const SessionOptions& options) {
  const auto& sizes = plan.fragment_sizes;
  if (sizes.empty()) throw std::invalid_argument("fragmentation plan is empty");
  for (int d : sizes)
    if (d <= 0) throw std::invalid_argument("fragment sizes must be positive");
  const int T = plan.segments();
  if (static_cast<int>(path.size()) != T)
    throw std::invalid_argument("path length " + std::to_string(path.size()) +
                                " does not match the " + std::to_string(T) + " segments");
  const int max_index = *std::max_element(path.sbs_sequence.begin(), path.sbs_sequence.end());
  const int N = options.N > 0 ? options.N : max_index;
  {
    std::vector<bool> seen(static_cast<std::size_t>(N) + 1, false);
    for (int sbs : path.sbs_sequence) {
      if (sbs < 1 || sbs > N) throw std::invalid_argument("SBS index outside [1, N]");
      if (seen[static_cast<std::size_t>(sbs)])
        throw std::invalid_argument("mobility path revisits SBS " + std::to_string(sbs));
      seen[static_cast<std::size_t>(sbs)] = true;
    }
  }

  const std::size_t F = sizes.size();
  std::vector<int> fragment_of(static_cast<std::size_t>(T));
  std::vector<int> first_segment(F);
  for (std::size_t f = 0, s = 0; f < F; ++f) {
    first_segment[f] = static_cast<int>(s);
    for (int i = 0; i < sizes[f]; ++i) fragment_of[s++] = static_cast<int>(f);
  }

  SessionTrace trace;
  trace.deltas.assign(F, 0);
  trace.share_sources.assign(F, {});

  std::size_t segment_bytes = 0;
  std::vector<std::vector<CodedSegment>> coded(F);
  std::vector<std::vector<CodedSegment>> held(F);
  std::vector<Bytes> decoded_segments;
  if (options.real_coding) {
    if (options.segment_bits <= 0 || options.segment_bits % 8 != 0)
      throw std::invalid_argument("real coding needs B to be a positive multiple of 8");
    segment_bytes = static_cast<std::size_t>(options.segment_bits / 8);
    std::mt19937_64 payload_rng(options.payload_seed);
    trace.original.resize(segment_bytes * static_cast<std::size_t>(T));
    for (auto& b : trace.original) b = static_cast<std::uint8_t>(payload_rng() & 0xFFu);
    decoded_segments.resize(static_cast<std::size_t>(T));
    for (std::size_t f = 0; f < F; ++f) {
      std::vector<Bytes> sources;
      for (int i = 0; i < sizes[f]; ++i) {
        const auto offset =
            static_cast<std::size_t>(first_segment[f] + i) * segment_bytes;
        sources.emplace_back(trace.original.begin() + static_cast<std::ptrdiff_t>(offset),
                             trace.original.begin() +
                                 static_cast<std::ptrdiff_t>(offset + segment_bytes));
      }
      coded[f] = encode(CodeSpec{sizes[f], N}, sources);
    }
  }

  constexpr int kNever = std::numeric_limits<int>::max();
  std::vector<int> decode_time(F, kNever);
  std::vector<int> received(F, 0);
  int next_segment = 0;

  for (int slot = 0; next_segment < T; ++slot) {
    SlotRecord rec;
    rec.slot = slot;

    // player: the segment needs its fragment decoded by the start of the slot
    const auto waiting = static_cast<std::size_t>(fragment_of[static_cast<std::size_t>(next_segment)]);
    rec.segment = next_segment;
    if (decode_time[waiting] <= slot) {
      rec.action = PlayerAction::Display;
      if (options.real_coding) {
        const Bytes& seg = decoded_segments[static_cast<std::size_t>(next_segment)];
        trace.displayed.insert(trace.displayed.end(), seg.begin(), seg.end());
      }
      ++next_segment;
    } else {
      rec.action = PlayerAction::Rebuffer;
      ++trace.deltas[waiting];
      ++trace.cumulative;
    }

    // download: one coded segment of the in-order fragment
    if (slot < T) {
      const int sbs = path.sbs_sequence[static_cast<std::size_t>(slot)];
      const auto f = static_cast<std::size_t>(fragment_of[static_cast<std::size_t>(slot)]);
      rec.sbs = sbs;
      rec.fragment = static_cast<int>(f);
      trace.share_sources[f].push_back(sbs);
      if (options.real_coding) held[f].push_back(coded[f][static_cast<std::size_t>(sbs - 1)]);
      if (++received[f] == sizes[f]) {
        decode_time[f] = slot + 1;
        rec.decoded.push_back(static_cast<int>(f));
        if (options.real_coding) {
          auto sources = decode(CodeSpec{sizes[f], N}, held[f]);
          for (int i = 0; i < sizes[f]; ++i)
            decoded_segments[static_cast<std::size_t>(first_segment[f] + i)] =
                std::move(sources[static_cast<std::size_t>(i)]);
        }
      }
    }
    trace.slots.push_back(std::move(rec));
  }
  return trace;
}

DelayStats monte_carlo_delay(const FragmentationPlan& plan, int N, std::size_t trials,
                             std::mt19937_64& rng, const SessionOptions& options) {
  if (trials == 0) throw std::invalid_argument("trials must be >= 1");
  const int expected = cumulative_delay(plan.fragment_sizes);
  DelayStats stats;
  stats.min = std::numeric_limits<int>::max();
  stats.max = std::numeric_limits<int>::min();
  long total = 0;
  SessionOptions opts = options;
  opts.N = N;
  for (std::size_t t = 0; t < trials; ++t) {
    std::mt19937_64 trial_rng(rng());
    const MobilityPath path = generate_path(N, plan.segments(), trial_rng);
    const SessionTrace trace = simulate_session(plan, path, opts);
    if (trace.cumulative != expected)
      throw std::logic_error("simulated delay " + std::to_string(trace.cumulative) +
                             " differs from the largest fragment " +
                             std::to_string(expected));
    stats.min = std::min(stats.min, trace.cumulative);
    stats.max = std::max(stats.max, trace.cumulative);
    total += trace.cumulative;
  }
  stats.trials = trials;
  stats.mean = static_cast<double>(total) / static_cast<double>(trials);
  return stats;
}

void write_trace(std::ostream& out, const SessionTrace& trace) {
  for (const SlotRecord& rec : trace.slots) {
    const std::string where = rec.sbs ? std::to_string(*rec.sbs) : "-";
    if (rec.fragment) out << rec.slot << ' ' << where << " recv f" << *rec.fragment << '\n';
    for (int f : rec.decoded) out << rec.slot << ' ' << where << " decode f" << f << '\n';
    out << rec.slot << ' ' << where
        << (rec.action == PlayerAction::Display ? " show s" : " stall s") << rec.segment
        << '\n';
  }
}

}  // namespace dacc
