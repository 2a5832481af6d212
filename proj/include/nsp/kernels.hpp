#pragma once

#include <cstddef>
#include <limits>
#include <vector>

namespace nsp::kernels {

// Global switch between the OpenMP kernels and the serial reference path.
// Both paths use the same blocked summation order, so results are bitwise
// identical; the switch exists for testing and benchmarking.
bool parallel_enabled();
void set_parallel(bool on);

inline constexpr std::size_t kBlock = 8192;

// Blocked reduction: partial sums per fixed-size block accumulated in index
// order, independent of thread count.
template <class Term>
double blocked_sum(std::size_t n, Term&& term) {
    const std::size_t nb = (n + kBlock - 1) / kBlock;
    std::vector<double> partial(nb, 0.0);
    const bool par = parallel_enabled();
#pragma omp parallel for schedule(static) if (par)
    for (long long b = 0; b < static_cast<long long>(nb); ++b) {
        const std::size_t lo = static_cast<std::size_t>(b) * kBlock;
        const std::size_t hi = lo + kBlock < n ? lo + kBlock : n;
        double s = 0.0;
        for (std::size_t i = lo; i < hi; ++i) s += term(i);
        partial[static_cast<std::size_t>(b)] = s;
    }
    double total = 0.0;
    for (double p : partial) total += p;
    return total;
}

// Blocked max reduction (same determinism argument).
template <class Term>
double blocked_max(std::size_t n, Term&& term) {
    const std::size_t nb = (n + kBlock - 1) / kBlock;
    const double lowest = -std::numeric_limits<double>::infinity();
    std::vector<double> partial(nb, lowest);
    const bool par = parallel_enabled();
#pragma omp parallel for schedule(static) if (par)
    for (long long b = 0; b < static_cast<long long>(nb); ++b) {
        const std::size_t lo = static_cast<std::size_t>(b) * kBlock;
        const std::size_t hi = lo + kBlock < n ? lo + kBlock : n;
        double m = lowest;
        for (std::size_t i = lo; i < hi; ++i) {
            const double v = term(i);
            if (v > m) m = v;
        }
        partial[static_cast<std::size_t>(b)] = m;
    }
    double total = lowest;
    for (double p : partial)
        if (p > total) total = p;
    return total;
}

// Elementwise map over [0, n).
template <class Body>
void parallel_for(std::size_t n, Body&& body) {
    const bool par = parallel_enabled();
#pragma omp parallel for schedule(static) if (par)
    for (long long i = 0; i < static_cast<long long>(n); ++i)
        body(static_cast<std::size_t>(i));
}

}  // namespace nsp::kernels
