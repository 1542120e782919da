#ifndef MOST_PARALLEL_HPP_
#define MOST_PARALLEL_HPP_

#include <cstdint>

namespace most {

/// Execution policy for the data-parallel kernels. Both variants produce
/// bit-identical results: parallel loops only write disjoint slots and all
/// floating-point reductions run serially in index order.
enum class Exec { kSerial, kOpenMP };

/// Worker-thread cap: min(OpenMP default, $MOST_MAX_THREADS when set).
int worker_threads();

/// Runs fn(i) for i in [0, count). With Exec::kOpenMP iterations are
/// distributed across worker_threads() threads; fn must only touch state
/// owned by index i.
template <typename Fn>
void parallel_for(Exec exec, std::int64_t count, const Fn& fn);

namespace detail {
void run_parallel(std::int64_t count, void (*trampoline)(void*, std::int64_t),
                  void* ctx);
}

template <typename Fn>
void parallel_for(Exec exec, std::int64_t count, const Fn& fn) {
  if (exec == Exec::kSerial) {
    for (std::int64_t i = 0; i < count; ++i) fn(i);
    return;
  }
  auto trampoline = [](void* ctx, std::int64_t i) {
    (*static_cast<const Fn*>(ctx))(i);
  };
  detail::run_parallel(count, trampoline, const_cast<Fn*>(&fn));
}

}  // namespace most

#endif  // MOST_PARALLEL_HPP_
