// The OpenMP sweeps must reproduce the serial reference bit for bit.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstring>
#include <vector>

#include "fanopa/params.hpp"
#include "fanopa/spectrum.hpp"

using namespace fanopa;

namespace {

ModelParams bench_params() {
    ModelParams p;
    p.gamma_f = 2.0;
    p.gamma_1 = 15.5;
    p.gamma_2 = 0.04;
    p.q_1 = -0.3;
    p.q_2 = 21.69;
    p.detuning_1 = 2.3;
    p.detuning_2 = 1.3;
    p.b0 = 47.97;
    p.dmu = -2.0;
    p.temperature = 3.5;
    p.k_bg = 1e-12;
    return p;
}

bool identical(const std::vector<double>& a, const std::vector<double>& b) {
    return a.size() == b.size() &&
           std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

} // namespace

TEST_CASE("parallel field sweep is bit-identical to the serial reference") {
    const ModelParams p = bench_params();
    QuadratureConfig quad;
    std::vector<double> grid(400);
    for (int i = 0; i < 400; ++i) grid[i] = 33.0 + 45.0 * i / 399.0;

    const Spectrum serial = sweep_field_serial(grid, {p.detuning_1, p.detuning_2}, p, quad);
    const Spectrum parallel = sweep_field(grid, {p.detuning_1, p.detuning_2}, p, quad);
    CHECK(identical(serial.rates, parallel.rates));
}

TEST_CASE("parallel detuning sweep is bit-identical to the serial reference") {
    const ModelParams p = bench_params();
    QuadratureConfig quad;
    std::vector<double> grid(321);
    for (int i = 0; i < 321; ++i) grid[i] = -40.0 + 80.0 * i / 320.0;

    const Spectrum serial = sweep_detuning_serial(grid, p.b0 + 1.5, p, quad);
    const Spectrum parallel = sweep_detuning(grid, p.b0 + 1.5, p, quad);
    CHECK(identical(serial.rates, parallel.rates));
}

TEST_CASE("repeated parallel runs are deterministic") {
    const ModelParams p = bench_params();
    QuadratureConfig quad;
    std::vector<double> grid(257);
    for (int i = 0; i < 257; ++i) grid[i] = 40.0 + 16.0 * i / 256.0;

    const Spectrum first = sweep_field(grid, {p.detuning_1, p.detuning_2}, p, quad);
    const Spectrum second = sweep_field(grid, {p.detuning_1, p.detuning_2}, p, quad);
    CHECK(identical(first.rates, second.rates));
}
