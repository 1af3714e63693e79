#include "dacc/delay_model.hpp"

#include <algorithm>
#include <stdexcept>

namespace dacc {

namespace {

void check_sizes(std::span<const int> sizes) {
  if (sizes.empty()) throw std::domain_error("fragment list is empty");
  for (int d : sizes)
    if (d <= 0) throw std::domain_error("fragment sizes must be positive");
}

}  // namespace

RebufferResult rebuffer_sequence(std::span<const int> fragment_sizes) {
  check_sizes(fragment_sizes);
  RebufferResult r;
  r.deltas.reserve(fragment_sizes.size());
  for (int d : fragment_sizes) {
    const int delta = std::max(d - r.cumulative, 0);
    r.deltas.push_back(delta);
    r.cumulative += delta;
  }
  return r;
}

RebufferResult rebuffer_timeline(std::span<const int> fragment_sizes) {
  check_sizes(fragment_sizes);
  RebufferResult r;
  long downloaded = 0;  // t_d
  long play_start = 0;  // t_p
  for (int d : fragment_sizes) {
    downloaded += d;
    const long delta = std::max(downloaded - play_start, 0L);
    r.deltas.push_back(static_cast<int>(delta));
    r.cumulative += static_cast<int>(delta);
    play_start += delta + d;
  }
  return r;
}

int cumulative_delay(std::span<const int> fragment_sizes) {
  check_sizes(fragment_sizes);
  return *std::max_element(fragment_sizes.begin(), fragment_sizes.end());
}

int omega(int T, int M) {
  if (M < 1 || M > T) throw std::domain_error("omega: M must lie in [1, T]");
  return (T + M - 1) / M;
}

DelayLevels::DelayLevels(int T) : T_(T) {
  if (T < 1) throw std::domain_error("T must be >= 1");
  for (int M = 1; M <= T; ++M) {
    const int d = omega(T, M);
    if (levels_.empty() || levels_.back().delay != d) levels_.push_back({d, M});
  }
}

int DelayLevels::step(std::size_t l) const {
  if (l + 1 >= levels_.size()) throw std::out_of_range("no level after the last");
  return levels_[l + 1].fragments - levels_[l].fragments;
}

bool DelayLevels::is_decrement_point(int M) const {
  return std::any_of(levels_.begin(), levels_.end(),
                     [M](const DelayLevel& lv) { return lv.fragments == M; });
}

std::size_t DelayLevels::level_at(int M) const {
  if (M < 1 || M > T_) throw std::out_of_range("M outside [1, T]");
  auto it = std::upper_bound(
      levels_.begin(), levels_.end(), M,
      [](int m, const DelayLevel& lv) { return m < lv.fragments; });
  return static_cast<std::size_t>(it - levels_.begin()) - 1;
}

double slope(double p, const DelayLevels& levels, std::size_t l) {
  if (l + 1 >= levels.size()) throw std::out_of_range("slope: no next level");
  // per-segment rate first so every file shares the exact same factor
  const double rate =
      static_cast<double>(levels.delay(l + 1) - levels.delay(l)) / levels.step(l);
  return p * rate;
}

double piecewise_delay(double p, const DelayLevels& levels, int M) {
  const std::size_t l = levels.level_at(M);
  const double base = p * levels.delay(l);
  if (M == levels.fragments(l)) return base;
  return base + slope(p, levels, l) * (M - levels.fragments(l));
}

double average_delay(const CachePlan& plan, std::span<const double> popularity, int T) {
  double total = 0.0;
  for (std::size_t k = 0; k < plan.size(); ++k)
    if (plan.M[k] > 0) total += popularity[k] * omega(T, plan.M[k]);
  return total;
}

double normalized_average_delay(const CachePlan& plan,
                                std::span<const double> popularity, int T) {
  double mass = 0.0;
  for (std::size_t k = 0; k < plan.size(); ++k)
    if (plan.M[k] > 0) mass += popularity[k];
  return mass > 0.0 ? average_delay(plan, popularity, T) / mass : 0.0;
}

}  // namespace dacc
