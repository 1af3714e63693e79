#include "dacc/verify.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>

#include "dacc/delay_model.hpp"
#include "dacc/erasure_coding.hpp"
#include "dacc/placement_optimizer.hpp"
#include "dacc/stream_sim.hpp"

namespace dacc {

namespace {

template <class Fn>
SuiteResult timed(std::string name, Fn&& body) {
  SuiteResult r;
  r.name = std::move(name);
  const auto start = std::chrono::steady_clock::now();
  body(r);
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

void fail(SuiteResult& r, const std::string& detail) {
  if (r.passed) r.detail = detail;
  r.passed = false;
}

std::string show(const std::vector<int>& v) {
  std::ostringstream s;
  s << '(';
  for (std::size_t i = 0; i < v.size(); ++i) s << (i ? "," : "") << v[i];
  s << ')';
  return s.str();
}

std::vector<double> random_popularity(std::size_t K, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> weight(0.05, 1.0);
  std::vector<double> p(K);
  for (auto& x : p) x = weight(rng);
  std::sort(p.begin(), p.end(), std::greater<>());
  const double total = std::accumulate(p.begin(), p.end(), 0.0);
  for (auto& x : p) x /= total;
  return p;
}

}  // namespace

bool VerifyReport::passed() const {
  return std::all_of(suites.begin(), suites.end(),
                     [](const SuiteResult& s) { return s.passed; });
}

std::vector<std::vector<int>> compositions(int n) {
  std::vector<std::vector<int>> out;
  if (n < 1) return out;
  const unsigned cuts = static_cast<unsigned>(n - 1);
  for (unsigned mask = 0; mask < (1u << cuts); ++mask) {
    std::vector<int> parts;
    int run = 1;
    for (unsigned i = 0; i < cuts; ++i) {
      if (mask & (1u << i)) {
        parts.push_back(run);
        run = 1;
      } else {
        ++run;
      }
    }
    parts.push_back(run);
    out.push_back(std::move(parts));
  }
  return out;
}

SuiteResult verify_rebuffer_closed_form() {
  return timed("rebuffer closed form (all compositions, T<=12)", [](SuiteResult& r) {
    std::size_t checked = 0;
    for (int T = 1; T <= 12; ++T) {
      for (const auto& sizes : compositions(T)) {
        ++checked;
        const RebufferResult seq = rebuffer_sequence(sizes);
        const RebufferResult tl = rebuffer_timeline(sizes);
        const int largest = *std::max_element(sizes.begin(), sizes.end());
        const int sum = std::accumulate(seq.deltas.begin(), seq.deltas.end(), 0);
        if (seq.cumulative != largest || sum != largest || tl.deltas != seq.deltas)
          fail(r, "sizes " + show(sizes));
        int running = 0;
        for (std::size_t m = 0; m < sizes.size(); ++m) {
          running += seq.deltas[m];
          if (seq.deltas[m] > 0 && running != sizes[m])
            fail(r, "stall identity broken for " + show(sizes));
        }
      }
    }
    if (r.passed) r.detail = std::to_string(checked) + " compositions";
  });
}

SuiteResult verify_delay_optimizer(std::uint64_t seed, int instances) {
  return timed("greedy delay optimizer vs exhaustive", [&](SuiteResult& r) {
    std::mt19937_64 rng(seed);
    int exact = 0;
    int done = 0;
    while (done < instances) {
      const auto K = static_cast<std::size_t>(std::uniform_int_distribution<int>(1, 5)(rng));
      const int T = std::uniform_int_distribution<int>(1, 10)(rng);
      const int d_max = std::uniform_int_distribution<int>(1, T)(rng);
      const DelayLevels levels(T);
      const std::size_t floor = fairness_floor_level(levels, d_max);
      const std::int64_t lo = static_cast<std::int64_t>(K) * levels.fragments(floor);
      if (lo > 30) continue;
      const std::int64_t budget = std::uniform_int_distribution<std::int64_t>(lo, 30)(rng);
      const auto p = random_popularity(K, rng);
      ++done;

      const auto greedy = minimize_delay(p, levels, budget, floor);
      const auto best = brute_force_delay_min(p, levels, budget, floor);
      const std::string tag = "K=" + std::to_string(K) + " T=" + std::to_string(T) +
                              " budget=" + std::to_string(budget);
      if (greedy.budget_used > budget) fail(r, "over budget: " + tag);
      for (int M : greedy.plan.M)
        if (M < levels.fragments(floor)) fail(r, "below floor: " + tag);
      if (greedy.approx_avg_delay > best.avg_delay + kDelayTolerance ||
          best.avg_delay > greedy.avg_delay + kDelayTolerance)
        fail(r, "sandwich broken: " + tag);
      if (greedy.exact_termination) {
        ++exact;
        if (std::fabs(greedy.avg_delay - best.avg_delay) > kDelayTolerance)
          fail(r, "exact termination but not optimal: " + tag);
      }
      const std::int64_t pad = epsilon_pad(greedy, levels);
      if (pad > (T + 1) / 2) fail(r, "pad too large: " + tag);
      if (!minimize_delay(p, levels, budget + pad, floor).exact_termination)
        fail(r, "padding did not restore exactness: " + tag);
    }
    if (r.passed)
      r.detail = std::to_string(instances) + " instances, " + std::to_string(exact) + " exact";
  });
}

SuiteResult verify_cost_optimizer(std::uint64_t seed, int instances) {
  return timed("cost optimizer vs exhaustive", [&](SuiteResult& r) {
    std::mt19937_64 rng(seed);
    int feasible = 0;
    double gap = 0.0;
    for (int i = 0; i < instances; ++i) {
      const auto K = static_cast<std::size_t>(std::uniform_int_distribution<int>(1, 5)(rng));
      const int T = std::uniform_int_distribution<int>(1, 10)(rng);
      const int d_max = std::uniform_int_distribution<int>(1, T)(rng);
      const DelayLevels levels(T);
      const std::size_t floor = fairness_floor_level(levels, d_max);
      const int floor_m = levels.fragments(floor);
      const std::int64_t budget =
          std::uniform_int_distribution<std::int64_t>(floor_m, std::max(30, floor_m))(rng);
      const double cap = std::uniform_real_distribution<double>(1.0, d_max)(rng);
      const auto p = random_popularity(K, rng);
      const auto best = brute_force_cost_min(p, levels, budget, floor, cap);
      const std::string tag = "K=" + std::to_string(K) + " T=" + std::to_string(T) +
                              " budget=" + std::to_string(budget);
      try {
        const auto got = minimize_cost(p, levels, budget, floor, cap);
        ++feasible;
        if (got.avg_delay > cap + kDelayTolerance) fail(r, "delay cap violated: " + tag);
        if (got.plan.segments_used() > budget) fail(r, "over budget: " + tag);
        for (int M : got.plan.M)
          if (M != 0 && M < floor_m) fail(r, "below floor: " + tag);
        if (got.theta < best.theta - 1e-12) fail(r, "beats the exhaustive optimum: " + tag);
        gap += got.theta - best.theta;
      } catch (const InfeasibleError&) {
        // only allowed when the most popular file alone misses the cap
        const auto single = minimize_delay(p, levels, budget, floor, 1);
        if (single.avg_delay <= cap + kDelayTolerance)
          fail(r, "reported infeasible but one file fits: " + tag);
      }
    }
    if (r.passed) {
      std::ostringstream s;
      s << feasible << "/" << instances << " feasible, mean cost gap "
        << (feasible ? gap / feasible : 0.0);
      r.detail = s.str();
    }
  });
}

SuiteResult verify_mds_roundtrip(std::uint64_t seed) {
  return timed("MDS any-k decode (k<=N<=10)", [&](SuiteResult& r) {
    std::mt19937_64 rng(seed);
    std::size_t decodes = 0;
    for (int N = 1; N <= 10; ++N) {
      for (int k = 1; k <= N; ++k) {
        const CodeSpec spec{k, N};
        std::vector<Bytes> sources(static_cast<std::size_t>(k), Bytes(64));
        for (auto& s : sources)
          for (auto& b : s) b = static_cast<std::uint8_t>(rng() & 0xFFu);
        const auto coded = encode(spec, sources);
        for (unsigned mask = 0; mask < (1u << N); ++mask) {
          if (std::popcount(mask) != k) continue;
          std::vector<CodedSegment> shares;
          for (int i = 0; i < N; ++i)
            if (mask & (1u << i)) shares.push_back(coded[static_cast<std::size_t>(i)]);
          ++decodes;
          if (decode(spec, shares) != sources)
            fail(r, "k=" + std::to_string(k) + " N=" + std::to_string(N));
        }
        std::vector<CodedSegment> short_set(coded.begin(), coded.begin() + (k - 1));
        bool refused = false;
        try {
          decode(spec, short_set);
        } catch (const std::invalid_argument&) {
          refused = true;
        }
        if (!refused) fail(r, "decoded from k-1 shares, k=" + std::to_string(k));
      }
    }
    if (r.passed) r.detail = std::to_string(decodes) + " subset decodes";
  });
}

SuiteResult verify_simulation(std::uint64_t seed, int paths_per_composition) {
  return timed("session simulation vs closed form (T=10, N=20)", [&](SuiteResult& r) {
    constexpr int kT = 10;
    constexpr int kN = 20;
    std::mt19937_64 rng(seed);
    std::size_t sessions = 0;
    SessionOptions options;
    options.real_coding = true;
    options.segment_bits = 64;
    options.N = kN;
    for (const auto& sizes : compositions(kT)) {
      const FragmentationPlan plan{0, sizes};
      const RebufferResult expected = rebuffer_sequence(sizes);
      for (int i = 0; i < paths_per_composition; ++i) {
        options.payload_seed = rng();
        const MobilityPath path = generate_path(kN, kT, rng);
        const SessionTrace trace = simulate_session(plan, path, options);
        ++sessions;
        if (trace.cumulative != cumulative_delay(sizes) || trace.deltas != expected.deltas)
          fail(r, "delay mismatch for " + show(sizes));
        if (trace.displayed != trace.original) fail(r, "payload corrupted for " + show(sizes));
        for (auto sources : trace.share_sources) {
          std::sort(sources.begin(), sources.end());
          if (std::adjacent_find(sources.begin(), sources.end()) != sources.end())
            fail(r, "duplicate share for " + show(sizes));
        }
      }
    }
    if (r.passed) r.detail = std::to_string(sessions) + " sessions";
  });
}

VerifyReport run_verify(std::uint64_t seed) {
  VerifyReport report;
  report.suites.push_back(verify_rebuffer_closed_form());
  report.suites.push_back(verify_delay_optimizer(seed));
  report.suites.push_back(verify_cost_optimizer(seed + 1));
  report.suites.push_back(verify_mds_roundtrip(seed + 2));
  report.suites.push_back(verify_simulation(seed + 3));
  return report;
}

void print_report(std::ostream& out, const VerifyReport& report) {
  for (const SuiteResult& s : report.suites)
    out << (s.passed ? "PASS  " : "FAIL  ") << std::left << std::setw(50) << s.name
        << std::right << std::fixed << std::setprecision(2) << std::setw(7) << s.seconds
        << " s  " << s.detail << '\n';
  out << (report.passed() ? "all suites passed" : "verification FAILED") << '\n';
}

}  // namespace dacc
