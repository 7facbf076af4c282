#pragma once

#include <algorithm>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace gev {

inline int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

inline int thread_id() {
#ifdef _OPENMP
  return omp_get_thread_num();
#else
  return 0;
#endif
}

inline void set_threads(int n) {
#ifdef _OPENMP
  if (n > 0) omp_set_num_threads(n);
#else
  (void)n;
#endif
}

// Concatenates per-thread buckets and sorts, so the result does not depend on
// the thread schedule. T needs p and q members.
template <class T>
std::vector<T> merge_sorted(std::vector<std::vector<T>>& buckets) {
  std::vector<T> out;
  for (auto& b : buckets) out.insert(out.end(), b.begin(), b.end());
  std::sort(out.begin(), out.end(), [](const T& a, const T& b) {
    return a.p != b.p ? a.p < b.p : a.q < b.q;
  });
  return out;
}

}  // namespace gev
