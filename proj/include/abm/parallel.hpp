#pragma once

// parallel.hpp -- deterministic parallel reduction used by the field and
// momentum kernels.
//
// Sums are accumulated over fixed-size index chunks and per-chunk partials
// are combined in chunk order, so the result is bitwise reproducible for
// any thread count or schedule. Serial mode is the plain left-to-right
// reference loop; the two modes may differ by floating-point reassociation
// only (<= ~1e-13 relative, tolerated by every consumer).

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace abm::par {

enum class ExecMode { serial, parallel };

inline int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

inline void set_threads(int n) {
#ifdef _OPENMP
    if (n > 0) omp_set_num_threads(n);
#else
    (void)n;
#endif
}

// Fixed so the reduction tree does not depend on the run-time thread count.
inline constexpr std::size_t reduce_chunk = 4096;

template <class T, class TermFn>
T reduce_indexed(std::size_t n, TermFn&& term, ExecMode mode = ExecMode::parallel) {
    T total{};
    if (n == 0) return total;
    if (mode == ExecMode::serial) {
        for (std::size_t i = 0; i < n; ++i) total += term(i);
        return total;
    }
    const std::size_t nchunks = (n + reduce_chunk - 1) / reduce_chunk;
    std::vector<T> partial(nchunks);
    std::exception_ptr error;
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (std::int64_t ci = 0; ci < static_cast<std::int64_t>(nchunks); ++ci) {
        try {
            const std::size_t begin = static_cast<std::size_t>(ci) * reduce_chunk;
            const std::size_t end = std::min(begin + reduce_chunk, n);
            T acc{};
            for (std::size_t i = begin; i < end; ++i) acc += term(i);
            partial[static_cast<std::size_t>(ci)] = acc;
        } catch (...) {
#ifdef _OPENMP
#pragma omp critical(abm_reduce_error)
#endif
            {
                if (!error) error = std::current_exception();
            }
        }
    }
    if (error) std::rethrow_exception(error);
    for (const T& p : partial) total += p;
    return total;
}

template <class BodyFn>
void for_each_index(std::size_t n, BodyFn&& body, ExecMode mode = ExecMode::parallel) {
    if (n == 0) return;
    if (mode == ExecMode::serial) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::exception_ptr error;
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(n); ++i) {
        try {
            body(static_cast<std::size_t>(i));
        } catch (...) {
#ifdef _OPENMP
#pragma omp critical(abm_foreach_error)
#endif
            {
                if (!error) error = std::current_exception();
            }
        }
    }
    if (error) std::rethrow_exception(error);
}

}  // namespace abm::par
