// Timing comparison of the OpenMP kernels against their serial references.

#include <cstdio>
#include <random>
#include <vector>

#include <omp.h>

#include "bcfem/linalg.hpp"

using bcfem::linalg::DenseMatrix;
using bcfem::linalg::Vector;

namespace {

DenseMatrix random_spd_ish(std::size_t n, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    DenseMatrix a(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) a(i, j) = u(rng);
        a(i, i) += static_cast<double>(n);  // diagonally dominant, well conditioned
    }
    return a;
}

template <class F>
double time_best_of(int reps, F&& f) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        double t0 = omp_get_wtime();
        f();
        best = std::min(best, omp_get_wtime() - t0);
    }
    return best;
}

}  // namespace

int main() {
    std::mt19937_64 rng(1234);
    std::printf("threads: %d\n", omp_get_max_threads());
    std::printf("%8s  %12s  %12s  %8s\n", "n", "serial [s]", "openmp [s]", "speedup");

    for (std::size_t n : {128, 256, 512, 1024}) {
        DenseMatrix a = random_spd_ish(n, rng);
        double ts = time_best_of(3, [&] { (void)bcfem::linalg::serial_ref::lu_factor(a); });
        double tp = time_best_of(3, [&] { (void)bcfem::linalg::lu_factor(a); });
        std::printf("%8zu  %12.6f  %12.6f  %7.2fx  (lu_factor)\n", n, ts, tp, ts / tp);

        Vector x(n);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        for (auto& v : x) v = u(rng);
        double ms = time_best_of(5, [&] {
            for (int i = 0; i < 50; ++i) (void)bcfem::linalg::matvec_serial(a, x);
        });
        double mp = time_best_of(5, [&] {
            for (int i = 0; i < 50; ++i) (void)bcfem::linalg::matvec(a, x);
        });
        std::printf("%8zu  %12.6f  %12.6f  %7.2fx  (matvec x50)\n", n, ms, mp, ms / mp);
    }
    return 0;
}
