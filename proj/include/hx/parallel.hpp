#ifndef HX_PARALLEL_HPP
#define HX_PARALLEL_HPP

#include <cstddef>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace hx::par {

inline int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

// Fixed block size for all deterministic reductions. Results are combined in
// block order, so sums are bit-identical for any thread count.
inline constexpr std::size_t block = 4096;

// Serial pairwise (tree) sum of f(i), i in [lo, hi).
template <class F>
double pairwise_sum(std::size_t lo, std::size_t hi, F&& f) {
    const std::size_t n = hi - lo;
    if (n <= 32) {
        double s = 0.0;
        for (std::size_t i = lo; i < hi; ++i) s += f(i);
        return s;
    }
    const std::size_t mid = lo + n / 2;
    return pairwise_sum(lo, mid, f) + pairwise_sum(mid, hi, f);
}

// Deterministic parallel sum: fixed-size blocks, each summed pairwise, block
// partials combined by a serial pairwise pass in index order.
template <class F>
double sum(std::size_t n, F&& f) {
    if (n == 0) return 0.0;
    const std::size_t nblocks = (n + block - 1) / block;
    if (nblocks == 1) return pairwise_sum(std::size_t{0}, n, f);
    std::vector<double> partial(nblocks);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (long long b = 0; b < (long long)nblocks; ++b) {
        const std::size_t lo = (std::size_t)b * block;
        const std::size_t hi = lo + block < n ? lo + block : n;
        partial[(std::size_t)b] = pairwise_sum(lo, hi, f);
    }
    return pairwise_sum(std::size_t{0}, nblocks, [&](std::size_t b) { return partial[b]; });
}

// Parallel max of f(i); max is exact so any reduction order gives the same bits.
template <class F>
double max(std::size_t n, F&& f) {
    double m = -1.7976931348623157e308;
#ifdef _OPENMP
#pragma omp parallel for schedule(static) reduction(max : m)
#endif
    for (long long i = 0; i < (long long)n; ++i) {
        const double v = f((std::size_t)i);
        if (v > m) m = v;
    }
    return m;
}

template <class F>
void for_each(std::size_t n, F&& f) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (long long i = 0; i < (long long)n; ++i) f((std::size_t)i);
}

// Dynamic schedule for uneven work items (per-item output must not depend on
// execution order).
template <class F>
void for_each_dynamic(std::size_t n, F&& f) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 1)
#endif
    for (long long i = 0; i < (long long)n; ++i) f((std::size_t)i);
}

} // namespace hx::par

#endif
