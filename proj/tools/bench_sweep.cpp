// Times the OpenMP field sweep against the serial reference on the same grid
// and verifies the outputs are bit-identical.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "fanopa/params.hpp"
#include "fanopa/spectrum.hpp"

using namespace fanopa;

namespace {

ModelParams bench_params() {
    ModelParams p;
    p.gamma_f = 2.0;
    p.gamma_1 = 15.5;
    p.gamma_2 = 0.04;
    p.gamma_sp_1 = 17.0;
    p.gamma_sp_2 = 17.0;
    p.q_1 = -0.3;
    p.q_2 = 21.69;
    p.detuning_1 = 2.3;
    p.detuning_2 = 1.3;
    p.b0 = 47.97;
    p.dmu = -2.0;
    p.temperature = 3.5;
    return p;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

} // namespace

int main(int argc, char** argv) {
    int n_points = 4000;
    if (argc > 1) n_points = std::atoi(argv[1]);
    if (n_points < 2) {
        std::fprintf(stderr, "usage: %s [grid-points >= 2]\n", argv[0]);
        return 1;
    }

    const ModelParams p = bench_params();
    QuadratureConfig quad;
    std::vector<double> grid(static_cast<std::size_t>(n_points));
    const double lo = p.b0 - 30.0, hi = p.b0 + 15.0;
    for (int i = 0; i < n_points; ++i)
        grid[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (n_points - 1);

#ifdef _OPENMP
    const int threads = omp_get_max_threads();
#else
    const int threads = 1;
#endif
    std::printf("field sweep benchmark: %d grid points, %d quadrature nodes, %d thread(s)\n",
                n_points, quad.node_count, threads);

    auto t0 = std::chrono::steady_clock::now();
    const Spectrum serial = sweep_field_serial(grid, {p.detuning_1, p.detuning_2}, p, quad);
    const double t_serial = seconds_since(t0);

    t0 = std::chrono::steady_clock::now();
    const Spectrum parallel = sweep_field(grid, {p.detuning_1, p.detuning_2}, p, quad);
    const double t_parallel = seconds_since(t0);

    const bool identical =
        serial.rates.size() == parallel.rates.size() &&
        std::memcmp(serial.rates.data(), parallel.rates.data(),
                    serial.rates.size() * sizeof(double)) == 0;

    std::printf("  serial   : %8.3f ms\n", 1e3 * t_serial);
    std::printf("  parallel : %8.3f ms  (speedup %.2fx)\n", 1e3 * t_parallel,
                t_serial / t_parallel);
    std::printf("  outputs bit-identical: %s\n", identical ? "yes" : "NO");
    return identical ? 0 : 1;
}
