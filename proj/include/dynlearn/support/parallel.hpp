#pragma once

#include <cstddef>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace dynlearn {

/// Serial keeps the reference implementation runnable everywhere; Parallel
/// uses OpenMP. Every parallel kernel in this project partitions work into
/// fixed-size blocks and reduces block results in index order, so the two
/// modes produce bitwise-identical output.
enum class ExecMode { Serial, Parallel };

/// Number of fixed-size blocks covering n items.
inline std::size_t block_count(std::size_t n, std::size_t block) {
  return (n + block - 1) / block;
}

template <class Fn>
void parallel_for(std::size_t n, ExecMode mode, Fn&& fn) {
  if (mode == ExecMode::Parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
    for (long long i = 0; i < static_cast<long long>(n); ++i) {
      fn(static_cast<std::size_t>(i));
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) fn(i);
  }
}

}  // namespace dynlearn
