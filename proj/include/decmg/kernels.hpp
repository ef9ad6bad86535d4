#pragma once

#include <cstddef>
#include <vector>

// Dense vector kernels shared by the smoothers and Krylov solvers.
// Parallel variants partition work into fixed-size blocks whose partial
// results are combined in index order, so a result never depends on the
// number of threads. Serial reference versions are kept for the test
// suite and the kernel benchmark.

namespace decmg::kernels {

inline constexpr std::size_t kDotBlock = 4096;

double dot_serial(const double* a, const double* b, std::size_t n);
double dot(const double* a, const double* b, std::size_t n);
double norm2(const double* a, std::size_t n);

void axpy(double alpha, const double* x, double* y, std::size_t n);   // y += alpha x
void scale(double alpha, double* x, std::size_t n);
void copy(const double* x, double* y, std::size_t n);
void fill(double v, double* x, std::size_t n);

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
    return dot(a.data(), b.data(), a.size());
}
inline double norm2(const std::vector<double>& a) { return norm2(a.data(), a.size()); }

} // namespace decmg::kernels
