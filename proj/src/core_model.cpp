#include "dacc/core_model.hpp"

#include <cmath>
#include <numeric>

namespace dacc {

void SystemConfig::validate() const {
  if (N < 1) throw std::invalid_argument("N must be >= 1");
  if (K < 1) throw std::invalid_argument("K must be >= 1");
  if (T < 1) throw std::invalid_argument("T must be >= 1");
  if (B < 1) throw std::invalid_argument("B must be >= 1");
  if (F != static_cast<std::int64_t>(T) * B)
    throw std::invalid_argument("F must equal T*B");
  if (lambda != B) throw std::invalid_argument("lambda must equal B");
  if (C < 0) throw std::invalid_argument("C must be >= 0");
  if (!(w >= 0.0)) throw std::invalid_argument("w must be >= 0");
  if (D_max < 1 || D_max > T)
    throw std::invalid_argument("D_max must lie in [1, T]");
  if (D_avgMax && (!(*D_avgMax >= 1.0) || *D_avgMax > D_max))
    throw std::invalid_argument("D_avgMax must lie in [1, D_max]");
}

std::vector<double> zipf_popularity(std::size_t K, double w) {
  if (K == 0) throw std::invalid_argument("empty library: K must be >= 1");
  if (!(w >= 0.0)) throw std::invalid_argument("Zipf skewness must be >= 0");
  std::vector<double> p(K);
  for (std::size_t k = 0; k < K; ++k)
    p[k] = std::pow(static_cast<double>(k + 1), -w);
  // smallest terms first
  long double total = 0.0L;
  for (std::size_t k = K; k-- > 0;) total += p[k];
  for (auto& x : p) x = static_cast<double>(x / total);
  return p;
}

VideoLibrary::VideoLibrary(std::vector<double> popularity)
    : p_(std::move(popularity)) {
  if (p_.empty()) throw std::invalid_argument("empty library");
  long double total = 0.0L;
  for (std::size_t k = 0; k < p_.size(); ++k) {
    if (!(p_[k] > 0.0))
      throw std::invalid_argument("popularity must be strictly positive");
    if (k > 0 && p_[k] > p_[k - 1])
      throw std::invalid_argument("files must be indexed by decreasing popularity");
    total += p_[k];
  }
  if (std::fabs(static_cast<double>(total) - 1.0) > 1e-12)
    throw std::invalid_argument("popularity must sum to 1");
}

VideoLibrary VideoLibrary::zipf(std::size_t K, double w) {
  return VideoLibrary(zipf_popularity(K, w));
}

int FragmentationPlan::segments() const {
  return std::accumulate(fragment_sizes.begin(), fragment_sizes.end(), 0);
}

std::vector<int> make_fragmentation(int T, int M) {
  if (M < 1 || M > T)
    throw std::domain_error("fragment count must lie in [1, T]");
  const int base = T / M;
  const int oversized = T % M;
  std::vector<int> sizes(static_cast<std::size_t>(M), base);
  for (int i = M - oversized; i < M; ++i) ++sizes[static_cast<std::size_t>(i)];
  return sizes;
}

std::int64_t CachePlan::segments_used() const {
  return std::accumulate(M.begin(), M.end(), std::int64_t{0});
}

std::vector<std::size_t> CachePlan::cached_set() const {
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < M.size(); ++k)
    if (M[k] > 0) out.push_back(k);
  return out;
}

std::int64_t plan_cache_bits(const CachePlan& plan, std::int64_t B) {
  return plan.segments_used() * B;
}

double uncached_mass(const CachePlan& plan, std::span<const double> popularity) {
  double theta = 0.0;
  for (std::size_t k = plan.size(); k-- > 0;)
    if (plan.M[k] == 0) theta += popularity[k];
  return theta;
}

}  // namespace dacc
