#include "dacc/placement_optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <queue>
#include <stdexcept>
#include <string>

#include "eviction_search.hpp"

namespace dacc {

namespace {

constexpr std::size_t kBruteForceMaxFiles = 6;
constexpr std::int64_t kBruteForceMaxBudget = 40;
constexpr double kTieTolerance = 1e-12;

// Steepness of file k's next linear piece; larger means faster delay drop.
double descent_rate(double p, const DelayLevels& levels, std::size_t l) {
  return -slope(p, levels, l);
}

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

void check_brute_force_size(std::size_t K, std::int64_t budget) {
  if (K > kBruteForceMaxFiles || budget > kBruteForceMaxBudget)
    throw std::invalid_argument("instance too large for exhaustive search");
}

// Fenwick tree over positions of the globally sorted step list.
template <class V>
class Fenwick {
 public:
  explicit Fenwick(std::size_t n) : tree_(n + 1, V{}) {}

  void add(std::size_t pos, V v) {
    for (std::size_t i = pos + 1; i < tree_.size(); i += i & (~i + 1)) tree_[i] += v;
  }
  // sum over [0, count)
  V prefix(std::size_t count) const {
    V s{};
    for (std::size_t i = count; i > 0; i -= i & (~i + 1)) s += tree_[i];
    return s;
  }
  // Largest count with prefix(count) <= limit; values must be non-negative.
  std::size_t max_prefix_within(V limit) const {
    std::size_t pos = 0;
    std::size_t mask = 1;
    while (mask * 2 < tree_.size()) mask *= 2;
    for (; mask > 0; mask /= 2) {
      const std::size_t next = pos + mask;
      if (next < tree_.size() && tree_[next] <= limit) {
        pos = next;
        limit -= tree_[next];
      }
    }
    return pos;
  }

 private:
  std::vector<V> tree_;
};

bool has_convex_relaxation(const DelayLevels& levels, std::size_t floor_level) {
  for (std::size_t l = floor_level; l + 2 < levels.size(); ++l)
    if (descent_rate(1.0, levels, l) < descent_rate(1.0, levels, l + 1)) return false;
  return true;
}

// Average delay of the greedy allocation over the top-n files for every n,
// in O(log S) per query. With non-increasing descent rates per file, the
// greedy takes steps in the order of one global sort by
// (rate desc, file asc, level asc), skipping files that are not cached, so
// the plan for the top-n files is a prefix of that list.
class GreedyDelayIndex {
 public:
  GreedyDelayIndex(std::span<const double> popularity, const DelayLevels& levels,
                   std::int64_t budget, std::size_t floor_level, std::size_t files)
      : p_(popularity),
        levels_(levels),
        budget_(budget),
        floor_level_(floor_level),
        per_file_(levels.size() - 1 - floor_level),
        sizes_(files * per_file_),
        gains_(files * per_file_) {
    steps_.reserve(files * per_file_);
    for (std::size_t k = 0; k < files; ++k)
      for (std::size_t l = floor_level; l + 1 < levels.size(); ++l)
        steps_.push_back({descent_rate(p_[k], levels, l), k, l});
    std::sort(steps_.begin(), steps_.end(), [](const Step& a, const Step& b) {
      if (a.rate != b.rate) return a.rate > b.rate;
      if (a.file != b.file) return a.file < b.file;
      return a.level < b.level;
    });
    position_.resize(steps_.size());
    for (std::size_t i = 0; i < steps_.size(); ++i) {
      const Step& s = steps_[i];
      position_[s.file * per_file_ + (s.level - floor_level)] = i;
      sizes_.add(i, levels.step(s.level));
      gains_.add(i, p_[s.file] * (levels.delay(s.level + 1) - levels.delay(s.level)));
    }
    mass_.resize(files + 1, 0.0);
    for (std::size_t k = 0; k < files; ++k) mass_[k + 1] = mass_[k] + p_[k];
    active_ = files;
  }

  // Files must be dropped from the least popular end.
  void shrink_to(std::size_t n) {
    while (active_ > n) {
      --active_;
      for (std::size_t j = 0; j < per_file_; ++j) {
        const std::size_t i = position_[active_ * per_file_ + j];
        const Step& s = steps_[i];
        sizes_.add(i, -levels_.step(s.level));
        gains_.add(i, -p_[s.file] * (levels_.delay(s.level + 1) - levels_.delay(s.level)));
      }
    }
  }

  double delay_estimate(std::size_t n) {
    shrink_to(n);
    const int floor_m = levels_.fragments(floor_level_);
    const std::int64_t spare = budget_ - static_cast<std::int64_t>(n) * floor_m;
    double d = mass_[n] * levels_.delay(floor_level_);
    if (spare <= 0 || steps_.empty()) return d;
    const std::size_t taken = sizes_.max_prefix_within(spare);
    d += gains_.prefix(taken);
    if (taken == steps_.size()) return d;
    const std::int64_t left = spare - sizes_.prefix(taken);
    if (left > 0) {
      const Step& s = steps_[taken];
      const int M = levels_.fragments(s.level) + static_cast<int>(left);
      d += p_[s.file] * (omega(levels_.slots(), M) - levels_.delay(s.level));
    }
    return d;
  }

 private:
  struct Step {
    double rate;
    std::size_t file;
    std::size_t level;
  };

  std::span<const double> p_;
  const DelayLevels& levels_;
  std::int64_t budget_;
  std::size_t floor_level_;
  std::size_t per_file_;
  std::vector<Step> steps_;
  std::vector<std::size_t> position_;
  Fenwick<std::int64_t> sizes_;
  Fenwick<double> gains_;
  std::vector<double> mass_;
  std::size_t active_ = 0;
};

}  // namespace

std::size_t fairness_floor_level(const DelayLevels& levels, int d_max, bool strict) {
  for (std::size_t l = 0; l < levels.size(); ++l) {
    const int d = levels.delay(l);
    if (strict ? d < d_max : d <= d_max) return l;
  }
  throw InfeasibleError("no delay level satisfies the per-file cap of " +
                        std::to_string(d_max) + " slots");
}

OptimizerOutcome summarize_plan(CachePlan plan, std::span<const double> popularity,
                                const DelayLevels& levels) {
  OptimizerOutcome out;
  out.avg_delay = average_delay(plan, popularity, levels.slots());
  for (std::size_t k = 0; k < plan.size(); ++k) {
    if (plan.M[k] == 0) continue;
    out.approx_avg_delay += piecewise_delay(popularity[k], levels, plan.M[k]);
    if (!levels.is_decrement_point(plan.M[k])) out.exact_termination = false;
  }
  out.budget_used = plan.segments_used();
  out.plan = std::move(plan);
  return out;
}

CostOutcome summarize_cost(CachePlan plan, std::span<const double> popularity,
                           const DelayLevels& levels, std::size_t evictions) {
  CostOutcome out;
  out.avg_delay = average_delay(plan, popularity, levels.slots());
  out.theta = uncached_mass(plan, popularity);
  out.cached_set = plan.cached_set();
  out.evictions = evictions;
  out.plan = std::move(plan);
  return out;
}

OptimizerOutcome minimize_delay(std::span<const double> popularity,
                                const DelayLevels& levels, std::int64_t budget,
                                std::size_t floor_level) {
  return minimize_delay(popularity, levels, budget, floor_level, popularity.size());
}

OptimizerOutcome minimize_delay(std::span<const double> popularity,
                                const DelayLevels& levels, std::int64_t budget,
                                std::size_t floor_level, std::size_t cached_files) {
  if (floor_level >= levels.size()) throw std::out_of_range("floor level out of range");
  if (cached_files > popularity.size())
    throw std::invalid_argument("more cached files than the library holds");
  require_floor_budget(cached_files, levels, budget, floor_level);

  const std::size_t last = levels.size() - 1;
  CachePlan plan{std::vector<int>(popularity.size(), 0)};
  std::vector<std::size_t> level(cached_files, floor_level);
  for (std::size_t k = 0; k < cached_files; ++k) plan.M[k] = levels.fragments(floor_level);
  std::int64_t remaining =
      budget - static_cast<std::int64_t>(cached_files) * levels.fragments(floor_level);

  // steepest first; equal rates go to the more popular (lower index) file
  using Entry = std::pair<double, std::size_t>;
  auto after = [](const Entry& a, const Entry& b) {
    if (a.first != b.first) return a.first < b.first;
    return a.second > b.second;
  };
  std::priority_queue<Entry, std::vector<Entry>, decltype(after)> queue(after);
  if (floor_level < last)
    for (std::size_t k = 0; k < cached_files; ++k)
      queue.emplace(descent_rate(popularity[k], levels, floor_level), k);

  while (remaining > 0 && !queue.empty()) {
    const std::size_t k = queue.top().second;
    queue.pop();
    const int step = levels.step(level[k]);
    if (remaining >= step) {
      ++level[k];
      plan.M[k] = levels.fragments(level[k]);
      remaining -= step;
      if (level[k] < last) queue.emplace(descent_rate(popularity[k], levels, level[k]), k);
    } else {
      plan.M[k] += static_cast<int>(remaining);
      remaining = 0;
    }
  }
  return summarize_plan(std::move(plan), popularity, levels);
}

std::int64_t epsilon_pad(const OptimizerOutcome& outcome, const DelayLevels& levels) {
  if (outcome.exact_termination) return 0;
  std::int64_t pad = 0;
  for (int M : outcome.plan.M) {
    if (M == 0 || levels.is_decrement_point(M)) continue;
    const std::size_t l = levels.level_at(M);
    pad += levels.fragments(l + 1) - M;
  }
  return pad;
}

CostOutcome minimize_cost(std::span<const double> popularity, const DelayLevels& levels,
                          std::int64_t budget, std::size_t floor_level,
                          double d_avg_max) {
  if (floor_level >= levels.size()) throw std::out_of_range("floor level out of range");
  const int floor_m = levels.fragments(floor_level);
  if (budget < floor_m)
    throw InfeasibleError("cache budget cannot hold a single file at the floor",
                          floor_m - budget);
  const std::size_t candidates =
      std::min<std::size_t>(static_cast<std::size_t>(budget / floor_m), popularity.size());

  auto allocate = [&](std::size_t n) {
    return minimize_delay(popularity, levels, budget, floor_level, n).plan;
  };

  if (has_convex_relaxation(levels, floor_level)) {
    GreedyDelayIndex index(popularity, levels, budget, floor_level, candidates);
    return detail::evict_until(
        popularity, levels, candidates, d_avg_max,
        [&](std::size_t n) { return index.delay_estimate(n); }, allocate);
  }
  // without per-file convexity the greedy order is not a global sort
  return detail::evict_until(
      popularity, levels, candidates, d_avg_max,
      [](std::size_t) { return 0.0; }, allocate);
}

OptimizerOutcome brute_force_delay_min(std::span<const double> popularity,
                                       const DelayLevels& levels, std::int64_t budget,
                                       std::size_t floor_level) {
  const std::size_t K = popularity.size();
  check_brute_force_size(K, budget);
  require_floor_budget(K, levels, budget, floor_level);
  const int lo = levels.fragments(floor_level);
  const int T = levels.slots();

  std::vector<int> current(K, lo);
  std::vector<int> best;
  double best_delay = 0.0;
  std::function<void(std::size_t, std::int64_t, double)> visit =
      [&](std::size_t k, std::int64_t left, double partial) {
        if (k == K) {
          if (best.empty() || partial < best_delay - kTieTolerance) {
            best = current;
            best_delay = partial;
          }
          return;
        }
        const std::int64_t reserve = static_cast<std::int64_t>(K - k - 1) * lo;
        for (int M = lo; M <= T && M <= left - reserve; ++M) {
          current[k] = M;
          visit(k + 1, left - M, partial + popularity[k] * omega(T, M));
        }
      };
  visit(0, budget, 0.0);
  return summarize_plan(CachePlan{best}, popularity, levels);
}

CostOutcome brute_force_cost_min(std::span<const double> popularity,
                                 const DelayLevels& levels, std::int64_t budget,
                                 std::size_t floor_level, double d_avg_max) {
  const std::size_t K = popularity.size();
  check_brute_force_size(K, budget);
  const int lo = levels.fragments(floor_level);
  const int T = levels.slots();

  std::vector<int> current(K, 0);
  std::vector<int> best;
  double best_theta = 0.0;
  double best_delay = 0.0;
  std::function<void(std::size_t, std::int64_t)> visit = [&](std::size_t k,
                                                              std::int64_t left) {
    if (k == K) {
      const CachePlan plan{current};
      const double d = average_delay(plan, popularity, T);
      if (d > d_avg_max + kDelayTolerance) return;
      const double theta = uncached_mass(plan, popularity);
      const bool better =
          best.empty() || theta < best_theta - kTieTolerance ||
          (theta <= best_theta + kTieTolerance && d < best_delay - kTieTolerance);
      if (better) {
        best = current;
        best_theta = theta;
        best_delay = d;
      }
      return;
    }
    current[k] = 0;
    visit(k + 1, left);
    for (int M = lo; M <= T && M <= left; ++M) {
      current[k] = M;
      visit(k + 1, left - M);
    }
    current[k] = 0;
  };
  visit(0, budget);
  if (best.empty())
    throw InfeasibleError("no plan meets the average delay cap of " +
                          std::to_string(d_avg_max));
  return summarize_cost(CachePlan{best}, popularity, levels);
}

}  // namespace dacc
