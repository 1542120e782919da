#include "most/parallel.hpp"

#include <omp.h>

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <string>

namespace most {

int worker_threads() {
  static const int cached = [] {
    int n = omp_get_max_threads();
    if (const char* cap = std::getenv("MOST_MAX_THREADS")) {
      try {
        int requested = std::stoi(cap);
        if (requested >= 1) n = std::min(n, requested);
      } catch (...) {
        // Malformed value: keep the OpenMP default.
      }
    }
    return std::max(1, n);
  }();
  return cached;
}

namespace detail {

void run_parallel(std::int64_t count, void (*trampoline)(void*, std::int64_t),
                  void* ctx) {
  const int threads = worker_threads();
  std::exception_ptr error;
#pragma omp parallel for schedule(static) num_threads(threads)
  for (std::int64_t i = 0; i < count; ++i) {
    // Exceptions must not escape the parallel region; stash the first one.
    try {
      trampoline(ctx, i);
    } catch (...) {
#pragma omp critical(most_parallel_error)
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
}

}  // namespace detail

}  // namespace most
