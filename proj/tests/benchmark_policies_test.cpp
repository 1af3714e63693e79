#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "dacc/benchmark_policies.hpp"
#include "dacc/core_model.hpp"
#include "dacc/placement_optimizer.hpp"

using namespace dacc;

namespace {

// Straight transcriptions of the two placement rules.
std::vector<int> naive_mpfc(std::size_t K, std::size_t n, int T, int floor_m,
                            std::int64_t budget) {
  std::vector<int> M(K, 0);
  for (std::size_t k = 0; k < n; ++k) M[k] = floor_m;
  std::int64_t left = budget - static_cast<std::int64_t>(n) * floor_m;
  for (std::size_t k = 0; k < n; ++k)
    while (left > 0 && M[k] < T) {
      ++M[k];
      --left;
    }
  return M;
}

std::vector<int> naive_efc(std::size_t K, std::size_t n, int T, int floor_m,
                           std::int64_t budget) {
  std::vector<int> M(K, 0);
  for (std::size_t k = 0; k < n; ++k) M[k] = floor_m;
  std::int64_t left = budget - static_cast<std::int64_t>(n) * floor_m;
  auto next_point = [T](int m) {
    int x = m + 1;
    while (x < T && (T + x - 1) / x == (T + m - 1) / m) ++x;
    return x;
  };
  bool moved = true;
  while (left > 0 && moved) {
    moved = false;
    for (std::size_t k = 0; k < n && left > 0; ++k) {
      if (M[k] == T) continue;
      const int need = next_point(M[k]) - M[k];
      if (left >= need) {
        M[k] += need;
        left -= need;
        moved = true;
      } else {
        M[k] += static_cast<int>(left);
        left = 0;
      }
    }
  }
  return M;
}

template <class Alloc>
double naive_cost(const std::vector<double>& p, int T, int floor_m, std::int64_t budget,
                  double cap, Alloc alloc, std::vector<int>* plan_out) {
  std::size_t n = std::min<std::size_t>(static_cast<std::size_t>(budget / floor_m), p.size());
  for (; n >= 1; --n) {
    const CachePlan plan{alloc(p.size(), n, T, floor_m, budget)};
    if (average_delay(plan, p, T) <= cap + kDelayTolerance) {
      *plan_out = plan.M;
      return uncached_mass(plan, p);
    }
  }
  return -1.0;
}

}  // namespace

TEST(Mpfc, Example) {
  const DelayLevels lv(10);
  const auto o = mpfc_delay(std::vector<double>{0.7, 0.3}, lv, 12, 0);
  EXPECT_EQ(o.plan.M, (std::vector<int>{10, 2}));
  EXPECT_NEAR(o.avg_delay, 2.2, 1e-12);
}

TEST(Efc, RoundRobinPasses) {
  const DelayLevels lv(10);
  const std::vector<double> p{0.7, 0.3};
  const auto six = efc_delay(p, lv, 6, 0);
  EXPECT_EQ(six.plan.M, (std::vector<int>{3, 3}));
  EXPECT_NEAR(six.avg_delay, 4.0, 1e-12);
  // a third pass fits into eight segments
  const auto eight = efc_delay(p, lv, 8, 0);
  EXPECT_EQ(eight.plan.M, (std::vector<int>{4, 4}));
  EXPECT_NEAR(eight.avg_delay, 3.0, 1e-12);
}

TEST(Benchmarks, SaturatedAndFloorBudgets) {
  const DelayLevels lv(10);
  const std::vector<double> p{0.5, 0.3, 0.2};
  for (std::int64_t b : {std::int64_t{6}, std::int64_t{30}}) {
    const auto m = mpfc_delay(p, lv, b, 1);
    const auto e = efc_delay(p, lv, b, 1);
    EXPECT_EQ(m.plan.M, e.plan.M);
  }
  EXPECT_NEAR(mpfc_delay(p, lv, 30, 0).avg_delay, 1.0, 1e-12);
  EXPECT_NEAR(efc_delay(p, lv, 30, 0).avg_delay, 1.0, 1e-12);
  EXPECT_EQ(mpfc_delay(p, lv, 6, 1).plan.M, (std::vector<int>{2, 2, 2}));
  EXPECT_THROW(mpfc_delay(p, lv, 5, 1), InfeasibleError);
  EXPECT_THROW(efc_delay(p, lv, 5, 1), InfeasibleError);
}

TEST(Benchmarks, SingleFileAgreesWithOptimizer) {
  const std::vector<double> p{1.0};
  for (int T = 1; T <= 15; ++T) {
    const DelayLevels lv(T);
    for (std::int64_t b = 1; b <= T + 3; ++b) {
      const auto g = minimize_delay(p, lv, b, 0);
      EXPECT_EQ(mpfc_delay(p, lv, b, 0).plan.M, g.plan.M);
      EXPECT_EQ(efc_delay(p, lv, b, 0).plan.M, g.plan.M);
    }
  }
}

TEST(Benchmarks, MatchTranscribedRules) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 300; ++trial) {
    const auto K = static_cast<std::size_t>(std::uniform_int_distribution<int>(1, 30)(rng));
    const int T = std::uniform_int_distribution<int>(1, 20)(rng);
    const DelayLevels lv(T);
    const std::size_t floor =
        fairness_floor_level(lv, std::uniform_int_distribution<int>(1, T)(rng));
    const int m = lv.fragments(floor);
    const auto n = static_cast<std::size_t>(
        std::uniform_int_distribution<int>(0, static_cast<int>(K))(rng));
    const std::int64_t budget = std::uniform_int_distribution<std::int64_t>(
        static_cast<std::int64_t>(n) * m, static_cast<std::int64_t>(K) * T + 5)(rng);
    EXPECT_EQ(mpfc_allocate(K, lv, budget, floor, n).M, naive_mpfc(K, n, T, m, budget));
    EXPECT_EQ(efc_allocate(K, lv, budget, floor, n).M, naive_efc(K, n, T, m, budget));
  }
}

TEST(Benchmarks, BudgetFeasibleAndFloored) {
  std::mt19937_64 rng(19);
  for (int trial = 0; trial < 200; ++trial) {
    const auto p = zipf_popularity(50, 0.9);
    const int T = std::uniform_int_distribution<int>(1, 20)(rng);
    const DelayLevels lv(T);
    const std::size_t floor =
        fairness_floor_level(lv, std::uniform_int_distribution<int>(1, T)(rng));
    const int m = lv.fragments(floor);
    const std::int64_t budget =
        std::uniform_int_distribution<std::int64_t>(50L * m, 50L * T + 10)(rng);
    for (const auto& o : {mpfc_delay(p, lv, budget, floor), efc_delay(p, lv, budget, floor)}) {
      EXPECT_LE(o.plan.segments_used(), budget);
      for (int M : o.plan.M) {
        EXPECT_GE(M, m);
        EXPECT_LE(M, T);
      }
    }
  }
}

TEST(MpfcCost, SmallTrace) {
  const DelayLevels lv(10);
  const std::vector<double> p{0.6, 0.3, 0.1};
  // (2,1,1) -> 7.0, then (3,1) -> 5.4, then (4) -> 1.8
  const auto o = mpfc_cost(p, lv, 4, 0, 4.0);
  EXPECT_EQ(o.plan.M, (std::vector<int>{4, 0, 0}));
  EXPECT_NEAR(o.theta, 0.4, 1e-12);
  EXPECT_NEAR(o.avg_delay, 1.8, 1e-12);
  EXPECT_EQ(o.evictions, 2u);
  EXPECT_LE(minimize_cost(p, lv, 4, 0, 4.0).theta, o.theta + 1e-12);
}

TEST(EfcCost, SmallTrace) {
  const DelayLevels lv(10);
  const std::vector<double> p{0.6, 0.3, 0.1};
  const auto o = efc_cost(p, lv, 4, 0, 5.0);
  EXPECT_EQ(o.plan.M, (std::vector<int>{2, 2, 0}));
  EXPECT_NEAR(o.theta, 0.1, 1e-12);
  const auto proposed = minimize_cost(p, lv, 4, 0, 5.0);
  EXPECT_TRUE(proposed.theta < o.theta - 1e-12 ||
              (std::abs(proposed.theta - o.theta) <= 1e-12 &&
               proposed.avg_delay <= o.avg_delay + 1e-12));
}

TEST(CostVariants, LooseCapMeansNoEviction) {
  const DelayLevels lv(10);
  const auto p = zipf_popularity(20, 0.8);
  for (const auto& o : {mpfc_cost(p, lv, 15, 0, 10.0), efc_cost(p, lv, 15, 0, 10.0)}) {
    EXPECT_EQ(o.evictions, 0u);
    EXPECT_EQ(o.cached_set.size(), 15u);
    std::vector<int> top(20, 0);
    std::fill_n(top.begin(), 15, 1);
    EXPECT_NEAR(o.theta, uncached_mass(CachePlan{top}, p), 1e-12);
  }
  for (const auto& o : {mpfc_cost(p, lv, 200, 0, 1.0), efc_cost(p, lv, 200, 0, 1.0)}) {
    EXPECT_EQ(o.theta, 0.0);
    EXPECT_NEAR(o.avg_delay, 1.0, 1e-12);
  }
}

TEST(CostVariants, SingleFileIsAllOrNothing) {
  const DelayLevels lv(10);
  const std::vector<double> p{1.0};
  EXPECT_EQ(mpfc_cost(p, lv, 5, 0, 2.0).plan.M, (std::vector<int>{5}));
  EXPECT_EQ(efc_cost(p, lv, 5, 0, 2.0).plan.M, (std::vector<int>{5}));
  EXPECT_THROW(mpfc_cost(p, lv, 4, 0, 2.0), InfeasibleError);
  EXPECT_THROW(efc_cost(p, lv, 4, 0, 2.0), InfeasibleError);
}

TEST(CostVariants, MatchLiteralEvictionLoops) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 150; ++trial) {
    const auto K = static_cast<std::size_t>(std::uniform_int_distribution<int>(1, 120)(rng));
    const int T = std::uniform_int_distribution<int>(1, 16)(rng);
    const DelayLevels lv(T);
    const std::size_t floor =
        fairness_floor_level(lv, std::uniform_int_distribution<int>(1, T)(rng));
    const int m = lv.fragments(floor);
    const std::int64_t budget = std::uniform_int_distribution<std::int64_t>(
        m, static_cast<std::int64_t>(K) * T)(rng);
    const double cap = std::uniform_real_distribution<double>(1.0, T)(rng);
    const auto p = zipf_popularity(K, std::uniform_real_distribution<double>(0.0, 1.5)(rng));

    std::vector<int> want;
    const double mt = naive_cost(p, T, m, budget, cap, naive_mpfc, &want);
    if (mt < 0) {
      EXPECT_THROW(mpfc_cost(p, lv, budget, floor, cap), InfeasibleError);
    } else {
      const auto got = mpfc_cost(p, lv, budget, floor, cap);
      EXPECT_EQ(got.plan.M, want) << "mpfc trial " << trial;
    }
    const double et = naive_cost(p, T, m, budget, cap, naive_efc, &want);
    if (et < 0) {
      EXPECT_THROW(efc_cost(p, lv, budget, floor, cap), InfeasibleError);
    } else {
      const auto got = efc_cost(p, lv, budget, floor, cap);
      EXPECT_EQ(got.plan.M, want) << "efc trial " << trial;
    }
  }
}
