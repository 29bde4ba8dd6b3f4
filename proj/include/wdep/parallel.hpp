#pragma once

#include <cstddef>
#include <exception>
#include <mutex>
#include <utility>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace wdep {

/// Execution policy for replicate loops and data-parallel kernels.
/// `serial` is the reference path; `parallel` must produce bit-identical output.
enum class Exec { serial, parallel };

inline int thread_count() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

inline void set_thread_count(int n) {
#ifdef _OPENMP
    if (n > 0) omp_set_num_threads(n);
#else
    (void)n;
#endif
}

/// Calls fn(i) for i in [0, count). Each index must write only its own output
/// slot; reductions happen afterwards in index order. The first exception
/// thrown by any index is rethrown on the calling thread.
template <class Fn>
void for_each_index(Exec exec, std::size_t count, Fn&& fn) {
    if (exec == Exec::serial || count < 2) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::exception_ptr failure;
    std::mutex failure_mutex;
    const auto n = static_cast<std::ptrdiff_t>(count);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        try {
            fn(static_cast<std::size_t>(i));
        } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
}

}  // namespace wdep
