// Compares the serial reference kernels against the OpenMP row-parallel
// ones on a Laplacian assembled from a large grid, and checks that both
// paths produce bitwise-identical results.

#include "decmg/kernels.hpp"
#include "decmg/mesh.hpp"
#include "decmg/operators.hpp"
#include "decmg/rng.hpp"

#include <chrono>
#include <cstdio>
#include <cstring>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace decmg;
namespace chrono = std::chrono;

namespace {

double time_ms(const std::function<void()>& body, int reps) {
    const auto t0 = chrono::steady_clock::now();
    for (int i = 0; i < reps; ++i) body();
    const auto t1 = chrono::steady_clock::now();
    return chrono::duration<double, std::milli>(t1 - t0).count() / reps;
}

} // namespace

int main(int argc, char** argv) {
    int n = 384;
    if (argc > 1) n = std::atoi(argv[1]);
    auto mesh = make_triangulated_grid(n, n, 1.0, 1.0);
    const DualGeometry dual = build_dual(*mesh);
    const LaplacianOperators ops = laplacian_0(*mesh, dual);
    const SparseOperator& L = ops.laplacian;

    std::printf("mesh: %d vertices, laplacian nnz = %lld\n", mesh->num_vertices(),
                static_cast<long long>(L.nnz()));
#ifdef _OPENMP
    std::printf("omp threads: %d\n", omp_get_max_threads());
#else
    std::printf("omp threads: (OpenMP disabled)\n");
#endif

    const std::vector<double> x = uniform01_vector(7, L.cols());
    std::vector<double> y_serial(L.rows()), y_omp(L.rows());

    const int reps = 50;
    const double t_csc = time_ms([&] { L.apply_serial(x.data(), y_serial.data()); }, reps);
    const double t_csr = time_ms([&] { L.apply(x.data(), y_omp.data()); }, reps);
    const bool spmv_same =
        std::memcmp(y_serial.data(), y_omp.data(), y_serial.size() * sizeof(double)) == 0;

    const double t_dot_serial =
        time_ms([&] { (void)kernels::dot_serial(x.data(), x.data(), x.size()); }, reps);
    const double t_dot_par =
        time_ms([&] { (void)kernels::dot(x.data(), x.data(), x.size()); }, reps);

    // The blocked dot must not depend on the thread count.
    const double dot_default = kernels::dot(x.data(), x.data(), x.size());
    bool dot_same = true;
#ifdef _OPENMP
    const int max_threads = omp_get_max_threads();
    omp_set_num_threads(1);
    dot_same = kernels::dot(x.data(), x.data(), x.size()) == dot_default;
    omp_set_num_threads(max_threads);
#endif

    std::printf("%-28s %10.3f ms\n", "spmv serial (CSC scatter)", t_csc);
    std::printf("%-28s %10.3f ms  speedup %.2fx  bitwise_equal=%s\n",
                "spmv parallel (CSR rows)", t_csr, t_csc / t_csr,
                spmv_same ? "yes" : "NO");
    std::printf("%-28s %10.3f ms\n", "dot serial", t_dot_serial);
    std::printf("%-28s %10.3f ms  speedup %.2fx  thread_invariant=%s\n", "dot blocked",
                t_dot_par, t_dot_serial / t_dot_par, dot_same ? "yes" : "NO");
    return (spmv_same && dot_same) ? 0 : 1;
}
