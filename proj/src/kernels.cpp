#include "decmg/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

namespace decmg::kernels {

double dot_serial(const double* a, const double* b, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
    return s;
}

double dot(const double* a, const double* b, std::size_t n) {
    if (n <= kDotBlock) return dot_serial(a, b, n);
    const std::size_t nblocks = (n + kDotBlock - 1) / kDotBlock;
    std::vector<double> partial(nblocks);
#pragma omp parallel for schedule(static)
    for (long long bi = 0; bi < static_cast<long long>(nblocks); ++bi) {
        const std::size_t lo = static_cast<std::size_t>(bi) * kDotBlock;
        const std::size_t hi = std::min(lo + kDotBlock, n);
        partial[bi] = dot_serial(a + lo, b + lo, hi - lo);
    }
    // Block partials are combined in index order regardless of thread count.
    double s = 0.0;
    for (double p : partial) s += p;
    return s;
}

double norm2(const double* a, std::size_t n) { return std::sqrt(dot(a, a, n)); }

void axpy(double alpha, const double* x, double* y, std::size_t n) {
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < static_cast<long long>(n); ++i) y[i] += alpha * x[i];
}

void scale(double alpha, double* x, std::size_t n) {
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < static_cast<long long>(n); ++i) x[i] *= alpha;
}

void copy(const double* x, double* y, std::size_t n) {
    std::memcpy(y, x, n * sizeof(double));
}

void fill(double v, double* x, std::size_t n) {
    std::fill(x, x + n, v);
}

} // namespace decmg::kernels
