#pragma once

#include <cstddef>
#include <cstdint>

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace spinkvn {

/// Execution policy for the data-parallel kernels. Serial paths are kept as
/// the reference the OpenMP paths are tested against.
enum class Exec { serial, parallel };

inline int max_threads() {
#if defined(_OPENMP)
  return omp_get_max_threads();
#else
  return 1;
#endif
}

/// Runs f(i) for i in [0, n). Iterations must touch disjoint data.
template <class F>
void parallel_for(std::size_t n, Exec exec, F&& f) {
  const auto count = static_cast<std::int64_t>(n);
  if (exec == Exec::serial) {
    for (std::int64_t i = 0; i < count; ++i) f(static_cast<std::size_t>(i));
    return;
  }
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < count; ++i) f(static_cast<std::size_t>(i));
}

}  // namespace spinkvn
