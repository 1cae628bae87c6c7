#pragma once

#include <cstddef>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace adauction {

/// Runs f(0..n-1), in parallel when OpenMP is available. Iterations must be
/// independent; results should be written to pre-sized slots so the outcome
/// is identical to the serial order.
template <typename F>
void parallel_for(std::size_t n, F&& f) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
  for (long long i = 0; i < static_cast<long long>(n); ++i) f(static_cast<std::size_t>(i));
#else
  for (std::size_t i = 0; i < n; ++i) f(i);
#endif
}

inline int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace adauction
