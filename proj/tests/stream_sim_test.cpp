#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>
#include <sstream>

#include "dacc/delay_model.hpp"
#include "dacc/stream_sim.hpp"
#include "dacc/verify.hpp"

using namespace dacc;

namespace {

void expect_valid_path(const MobilityPath& path, int N, int T) {
  ASSERT_EQ(static_cast<int>(path.size()), T);
  std::set<int> seen(path.sbs_sequence.begin(), path.sbs_sequence.end());
  EXPECT_EQ(static_cast<int>(seen.size()), T);
  EXPECT_GE(*seen.begin(), 1);
  EXPECT_LE(*seen.rbegin(), N);
}

MobilityPath identity_path(int T) {
  MobilityPath p;
  for (int i = 1; i <= T; ++i) p.sbs_sequence.push_back(i);
  return p;
}

}  // namespace

TEST(Path, PermutationWhenNEqualsT) {
  std::mt19937_64 rng(1);
  const auto path = generate_path(7, 7, rng);
  expect_valid_path(path, 7, 7);
  auto sorted = path.sbs_sequence;
  std::sort(sorted.begin(), sorted.end());
  EXPECT_EQ(sorted, identity_path(7).sbs_sequence);
}

TEST(Path, DistinctAndInRange) {
  std::mt19937_64 rng(2);
  for (int i = 0; i < 500; ++i) expect_valid_path(generate_path(6, 5, rng), 6, 5);
}

TEST(Path, ShapeFromTheSetupIsValid) {
  const MobilityPath p{{1, 3, 4, 5, 6}};
  const FragmentationPlan plan{0, {2, 3}};
  EXPECT_NO_THROW(simulate_session(plan, p, {}));
}

TEST(Path, DeterministicForSeed) {
  std::mt19937_64 a(99), b(99);
  for (int i = 0; i < 20; ++i)
    EXPECT_EQ(generate_path(50, 10, a).sbs_sequence, generate_path(50, 10, b).sbs_sequence);
}

TEST(Path, RoughlyUniform) {
  std::mt19937_64 rng(4);
  std::vector<int> hits(11, 0);
  constexpr int kRuns = 20000;
  for (int i = 0; i < kRuns; ++i)
    for (int s : generate_path(10, 3, rng).sbs_sequence) ++hits[static_cast<std::size_t>(s)];
  for (int s = 1; s <= 10; ++s) EXPECT_NEAR(hits[static_cast<std::size_t>(s)], kRuns * 0.3, 400);
}

TEST(Path, TooFewStations) {
  std::mt19937_64 rng(3);
  EXPECT_THROW(generate_path(4, 5, rng), InfeasibleError);
}

TEST(Session, EqualThirds) {
  const auto t = simulate_session(FragmentationPlan{0, {3, 3, 3}}, identity_path(9));
  EXPECT_EQ(t.cumulative, 3);
  EXPECT_EQ(t.deltas, (std::vector<int>{3, 0, 0}));
}

TEST(Session, SingleFragmentStartsAtSlotT) {
  const auto t = simulate_session(FragmentationPlan{0, {10}}, identity_path(10));
  EXPECT_EQ(t.cumulative, 10);
  for (const auto& rec : t.slots) {
    if (rec.slot < 10)
      EXPECT_EQ(rec.action, PlayerAction::Rebuffer);
    else
      EXPECT_EQ(rec.action, PlayerAction::Display);
  }
  EXPECT_EQ(t.slots.size(), 20u);
}

TEST(Session, MixedSizesMatchRecursion) {
  const std::vector<int> sizes{2, 4, 1, 3};
  const auto t = simulate_session(FragmentationPlan{0, sizes}, identity_path(10));
  EXPECT_EQ(t.deltas, (std::vector<int>{2, 2, 0, 0}));
  EXPECT_EQ(t.cumulative, 4);
  EXPECT_EQ(t.deltas, rebuffer_sequence(sizes).deltas);
}

TEST(Session, TraceInvariants) {
  std::mt19937_64 rng(5);
  SessionOptions opt;
  opt.real_coding = true;
  opt.N = 15;
  for (int T = 1; T <= 9; ++T) {
    for (const auto& sizes : compositions(T)) {
      const auto path = generate_path(15, T, rng);
      const auto t = simulate_session(FragmentationPlan{0, sizes}, path, opt);
      ASSERT_EQ(t.cumulative, cumulative_delay(sizes));
      int stalls = 0, downloads = 0, shown = 0;
      std::vector<int> decoded_at(sizes.size(), -1);
      for (const auto& rec : t.slots) {
        if (rec.fragment) {
          ++downloads;
          EXPECT_EQ(*rec.sbs, path.sbs_sequence[static_cast<std::size_t>(rec.slot)]);
        }
        for (int f : rec.decoded) decoded_at[static_cast<std::size_t>(f)] = rec.slot + 1;
        if (rec.action == PlayerAction::Rebuffer) {
          ++stalls;
        } else {
          EXPECT_EQ(rec.segment, shown);  // in order
          ++shown;
          int f = 0, acc = sizes[0];
          while (rec.segment >= acc) acc += sizes[static_cast<std::size_t>(++f)];
          const int ready = decoded_at[static_cast<std::size_t>(f)];
          EXPECT_GE(ready, 0);
          EXPECT_LE(ready, rec.slot);  // causality
        }
      }
      EXPECT_EQ(downloads, T);
      EXPECT_EQ(shown, T);
      EXPECT_EQ(stalls, t.cumulative);
      EXPECT_EQ(t.displayed, t.original);
      EXPECT_EQ(t.original.size(), static_cast<std::size_t>(T));
      for (auto src : t.share_sources) {
        std::sort(src.begin(), src.end());
        EXPECT_EQ(std::adjacent_find(src.begin(), src.end()), src.end());
      }
    }
  }
}

TEST(Session, Errors) {
  EXPECT_THROW(simulate_session(FragmentationPlan{0, {3, 3}}, identity_path(5)),
               std::invalid_argument);
  EXPECT_THROW(simulate_session(FragmentationPlan{0, {2, 1}}, MobilityPath{{1, 2, 1}}),
               std::invalid_argument);
  SessionOptions opt;
  opt.real_coding = true;
  opt.segment_bits = 12;
  EXPECT_THROW(simulate_session(FragmentationPlan{0, {3}}, identity_path(3), opt),
               std::invalid_argument);
  EXPECT_THROW(simulate_session(FragmentationPlan{0, {}}, MobilityPath{}), std::invalid_argument);
}

TEST(MonteCarlo, PathIndependent) {
  std::mt19937_64 rng(6);
  auto s = monte_carlo_delay(FragmentationPlan{0, {5, 5}}, 20, 100, rng);
  EXPECT_EQ(s.mean, 5.0);
  EXPECT_EQ(s.min, 5);
  EXPECT_EQ(s.max, 5);
  EXPECT_EQ(s.trials, 100u);
  s = monte_carlo_delay(FragmentationPlan{0, std::vector<int>(10, 1)}, 10, 1, rng);
  EXPECT_EQ(s.max, 1);
  s = monte_carlo_delay(FragmentationPlan{0, {10}}, 12, 10, rng);
  EXPECT_EQ(s.mean, 10.0);
  EXPECT_THROW(monte_carlo_delay(FragmentationPlan{0, {10}}, 12, 0, rng), std::invalid_argument);
}

TEST(Trace, LineFormat) {
  const auto t = simulate_session(FragmentationPlan{0, {1, 1}}, MobilityPath{{4, 2}});
  std::ostringstream out;
  write_trace(out, t);
  EXPECT_EQ(out.str(),
            "0 4 recv f0\n"
            "0 4 decode f0\n"
            "0 4 stall s0\n"
            "1 2 recv f1\n"
            "1 2 decode f1\n"
            "1 2 show s0\n"
            "2 - show s1\n");
}
