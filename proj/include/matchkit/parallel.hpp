#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace matchkit {

// First index in [0, n) satisfying pred, or n if none. The OpenMP variant
// reduces to the minimum matching index, so the result is identical to the
// serial scan regardless of scheduling.
std::size_t first_match_serial(std::size_t n,
                               const std::function<bool(std::size_t)>& pred);
std::size_t first_match_parallel(std::size_t n,
                                 const std::function<bool(std::size_t)>& pred);

// Dispatches to the parallel kernel above a size threshold.
std::size_t first_match(std::size_t n,
                        const std::function<bool(std::size_t)>& pred);

// Evaluate pred on every index, returning the sorted list of matches.
std::vector<std::size_t> all_matches_serial(
    std::size_t n, const std::function<bool(std::size_t)>& pred);
std::vector<std::size_t> all_matches_parallel(
    std::size_t n, const std::function<bool(std::size_t)>& pred);
std::vector<std::size_t> all_matches(
    std::size_t n, const std::function<bool(std::size_t)>& pred);

// Index of the maximum score over [0, n); the earliest index wins ties, so
// the result matches the serial left-to-right scan.
template <class ScoreFn>
std::size_t arg_best(std::size_t n, const ScoreFn& score) {
  if (n <= 1) return 0;
  std::size_t best_i = 0;
  auto best_v = score(0);
#pragma omp parallel if (n >= (std::size_t{1} << 10))
  {
    bool has = false;
    std::size_t local_i = 0;
    auto local_v = best_v;
#pragma omp for nowait
    for (long long i = 1; i < static_cast<long long>(n); ++i) {
      auto v = score(static_cast<std::size_t>(i));
      if (!has || v > local_v) {
        has = true;
        local_v = v;
        local_i = static_cast<std::size_t>(i);
      }
    }
#pragma omp critical
    {
      if (has && (local_v > best_v || (local_v == best_v && local_i < best_i))) {
        best_v = local_v;
        best_i = local_i;
      }
    }
  }
  return best_i;
}

} // namespace matchkit
