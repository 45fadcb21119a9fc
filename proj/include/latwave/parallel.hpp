#pragma once

#include <cstddef>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace latwave {

inline int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

/// Pairwise reduction of a contiguous range. The summation tree depends only
/// on the element count, so results are bit-identical regardless of thread
/// count or schedule of whoever filled the range.
template <class T>
T pairwise_reduce(const T* data, std::size_t n) {
  if (n == 0) return T{};
  if (n <= 8) {
    T acc = data[0];
    for (std::size_t i = 1; i < n; ++i) acc = acc + data[i];
    return acc;
  }
  std::size_t half = n / 2;
  return pairwise_reduce(data, half) + pairwise_reduce(data + half, n - half);
}

/// Deterministic sum of term(i) for i in [0, n). Terms are accumulated in
/// fixed-size blocks (independent of thread count), block sums pairwise
/// reduced. `parallel` only toggles whether blocks are farmed out to OpenMP.
template <class T, class Term>
T blocked_sum(std::size_t n, Term&& term, bool parallel = true,
              std::size_t block = 1024) {
  if (n == 0) return T{};
  std::size_t nblocks = (n + block - 1) / block;
  std::vector<T> partial(nblocks);
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (parallel && nblocks > 1)
#endif
  for (long long b = 0; b < static_cast<long long>(nblocks); ++b) {
    std::size_t lo = static_cast<std::size_t>(b) * block;
    std::size_t hi = lo + block < n ? lo + block : n;
    T acc{};
    for (std::size_t i = lo; i < hi; ++i) acc = acc + term(i);
    partial[static_cast<std::size_t>(b)] = acc;
  }
  (void)parallel;
  return pairwise_reduce(partial.data(), partial.size());
}

} // namespace latwave
