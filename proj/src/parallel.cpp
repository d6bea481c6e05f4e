#include "matchkit/parallel.hpp"

#include <algorithm>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace matchkit {

namespace {
constexpr std::size_t kParallelThreshold = 1u << 10;
}

std::size_t first_match_serial(std::size_t n,
                               const std::function<bool(std::size_t)>& pred) {
  for (std::size_t i = 0; i < n; ++i)
    if (pred(i)) return i;
  return n;
}

std::size_t first_match_parallel(std::size_t n,
                                 const std::function<bool(std::size_t)>& pred) {
#ifdef _OPENMP
  std::size_t best = n;
#pragma omp parallel
  {
    std::size_t local = n;
#pragma omp for schedule(static) nowait
    for (long long i = 0; i < static_cast<long long>(n); ++i) {
      auto idx = static_cast<std::size_t>(i);
      if (idx < local && pred(idx)) local = idx;
    }
#pragma omp critical
    best = std::min(best, local);
  }
  return best;
#else
  return first_match_serial(n, pred);
#endif
}

std::size_t first_match(std::size_t n,
                        const std::function<bool(std::size_t)>& pred) {
  if (n < kParallelThreshold) return first_match_serial(n, pred);
  return first_match_parallel(n, pred);
}

std::vector<std::size_t> all_matches_serial(
    std::size_t n, const std::function<bool(std::size_t)>& pred) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < n; ++i)
    if (pred(i)) out.push_back(i);
  return out;
}

std::vector<std::size_t> all_matches_parallel(
    std::size_t n, const std::function<bool(std::size_t)>& pred) {
#ifdef _OPENMP
  std::vector<std::size_t> out;
#pragma omp parallel
  {
    std::vector<std::size_t> local;
#pragma omp for schedule(static) nowait
    for (long long i = 0; i < static_cast<long long>(n); ++i) {
      auto idx = static_cast<std::size_t>(i);
      if (pred(idx)) local.push_back(idx);
    }
#pragma omp critical
    out.insert(out.end(), local.begin(), local.end());
  }
  std::sort(out.begin(), out.end());
  return out;
#else
  return all_matches_serial(n, pred);
#endif
}

std::vector<std::size_t> all_matches(
    std::size_t n, const std::function<bool(std::size_t)>& pred) {
  if (n < kParallelThreshold) return all_matches_serial(n, pred);
  return all_matches_parallel(n, pred);
}

} // namespace matchkit
