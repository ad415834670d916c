#include "fanopa/spectrum.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <string>

#include "fanopa/errors.hpp"
#include "fanopa/quadrature.hpp"

namespace fanopa {

void QuadratureConfig::validate() const {
    if (node_count < 8)
        throw ValidationError("QuadratureConfig.node_count must be >= 8");
    if (scheme == QuadScheme::GaussLaguerre && node_count > 180)
        throw ValidationError("QuadratureConfig.node_count must be <= 180 for Gauss-Laguerre");
    if (!(energy_cutoff >= 5.0))
        throw ValidationError("QuadratureConfig.energy_cutoff must be >= 5 (k_B T units)");
    if (!(tolerance > 0.0))
        throw ValidationError("QuadratureConfig.tolerance must be > 0");
}

void Spectrum::validate() const {
    if (axis.size() != rates.size())
        throw ValidationError("Spectrum axis and rates differ in length");
    for (std::size_t i = 1; i < axis.size(); ++i)
        if (!(axis[i] > axis[i - 1]))
            throw ValidationError("Spectrum axis must be strictly increasing");
    for (double r : rates)
        if (!(r >= 0.0) || !std::isfinite(r))
            throw ValidationError("Spectrum rates must be finite and nonnegative");
}

Complex s_decay(const DressedAmplitudes& amps, const ModelParams& p) {
    const SWaveCouplings c = s_wave_couplings(p);
    const Complex t = c.v_art_1 * amps.a_1 + c.v_art_2 * amps.a_2;
    const Complex s = Complex(0.0, -2.0 * M_PI) * t;
    const double s2 = std::norm(s);
    if (s2 > 1.0 + 1e-6)
        throw UnitarityViolation("|S_decay|^2 = " + std::to_string(s2) +
                                 " exceeds 1; parameters are inconsistent");
    if (s2 > 1.0 + 1e-9) {
        static std::atomic<bool> warned{false};
        if (!warned.exchange(true))
            std::fprintf(stderr, "fanopa: warning: |S_decay|^2 = %.12g just above unity (roundoff scale)\n", s2);
    }
    return s;
}

namespace {

double s2_at_energy(double collision_e, double e_c, const ModelParams& p) {
    const double eps = reduced_energy(collision_e, e_c, 0.0, p.gamma_f);
    const DressedAmplitudes amps = dressed_amplitudes(eps, collision_e, p);
    return std::norm(s_decay(amps, p));
}

} // namespace

double loss_rate_at_energy(double collision_e, double b_field, const ModelParams& p) {
    if (!(collision_e > 0.0))
        throw DomainError("loss_rate_at_energy requires collision_e > 0");
    const double e_c = closed_channel_energy(b_field, p);
    return p.constants.loss_rate_scale(collision_e) * s2_at_energy(collision_e, e_c, p);
}

double boltzmann_weighted_integral(const std::function<double(double)>& s2,
                                   double kT_mhz, const QuadratureConfig& quad) {
    quad.validate();
    if (!(kT_mhz > 0.0))
        throw DomainError("boltzmann_weighted_integral requires kT > 0");
    if (quad.scheme == QuadScheme::GaussLaguerre) {
        const QuadratureRule& rule = gauss_laguerre(quad.node_count);
        double sum = 0.0;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i)
            sum += rule.weights[i] * s2(kT_mhz * rule.nodes[i]);
        return kT_mhz * sum;
    }
    // Adaptive Simpson over [~0, cutoff * kT]; the lower end stays strictly
    // positive because the loss-rate formulas require E > 0.
    const double lo = kT_mhz * 1e-12;
    const double hi = kT_mhz * quad.energy_cutoff;
    auto integrand = [&](double e) { return std::exp(-e / kT_mhz) * s2(e); };
    return adaptive_simpson(integrand, lo, hi, quad.tolerance);
}

double thermal_average(double b_field, const ModelParams& p, const QuadratureConfig& quad) {
    const double kT = p.constants.thermal_energy_mhz(p.temperature);
    const double e_c = closed_channel_energy(b_field, p);
    auto s2 = [&](double e) { return s2_at_energy(e, e_c, p); };
    const double integral = boltzmann_weighted_integral(s2, kT, quad);
    return p.constants.thermal_rate_prefactor(p.temperature) * integral + p.k_bg;
}

double approx_thermal(double b_field, double collision_e_eval, const ModelParams& p) {
    if (!(collision_e_eval > 0.0))
        throw DomainError("approx_thermal requires collision_e_eval > 0");
    const double e_c = closed_channel_energy(b_field, p);
    return p.constants.constant_s2_rate(p.temperature) * s2_at_energy(collision_e_eval, e_c, p) +
           p.k_bg;
}

namespace {

void check_strictly_increasing(const std::vector<double>& grid, const char* what) {
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (!(grid[i] > grid[i - 1]))
            throw ValidationError(std::string(what) + " grid must be strictly increasing");
}

// Evaluates rate(i) over pre-assigned slots, optionally across OpenMP
// threads. Every slot runs the same code in the same per-point order, so
// parallel and serial results match bit for bit. The first failure (by grid
// index) is rethrown annotated with that index.
template <typename PointFn>
void run_grid(std::vector<double>& out, const PointFn& point, bool parallel) {
    const long n = static_cast<long>(out.size());
    std::exception_ptr first_error = nullptr;
    long first_error_index = n;
#pragma omp parallel for schedule(static) if (parallel)
    for (long i = 0; i < n; ++i) {
        try {
            out[static_cast<std::size_t>(i)] = point(static_cast<std::size_t>(i));
        } catch (...) {
#pragma omp critical(fanopa_sweep_error)
            if (i < first_error_index) {
                first_error_index = i;
                first_error = std::current_exception();
            }
        }
    }
    if (first_error) {
        try {
            std::rethrow_exception(first_error);
        } catch (const Error& e) {
            throw Error(e.category(), "at grid index " + std::to_string(first_error_index) +
                                          ": " + e.what());
        }
    }
}

Spectrum sweep_field_impl(const std::vector<double>& b_grid,
                          std::pair<double, double> fixed_detunings,
                          const ModelParams& params, const QuadratureConfig& quad,
                          bool parallel) {
    check_strictly_increasing(b_grid, "field");
    ModelParams p = params;
    p.detuning_1 = fixed_detunings.first;
    p.detuning_2 = fixed_detunings.second;
    p.validate();
    quad.validate();
    if (quad.scheme == QuadScheme::GaussLaguerre)
        gauss_laguerre(quad.node_count); // warm the cache outside the parallel region

    Spectrum spec;
    spec.axis_kind = AxisKind::FieldSweep;
    spec.axis = b_grid;
    spec.rates.assign(b_grid.size(), 0.0);
    spec.meta = p;
    run_grid(spec.rates, [&](std::size_t i) { return thermal_average(spec.axis[i], p, quad); },
             parallel);
    return spec;
}

Spectrum sweep_detuning_impl(const std::vector<double>& delta_grid, double fixed_b,
                             const ModelParams& params, const QuadratureConfig& quad,
                             bool parallel) {
    check_strictly_increasing(delta_grid, "detuning");
    params.validate();
    quad.validate();
    if (quad.scheme == QuadScheme::GaussLaguerre)
        gauss_laguerre(quad.node_count);

    Spectrum spec;
    spec.axis_kind = AxisKind::DetuningSweep;
    spec.axis = delta_grid;
    spec.rates.assign(delta_grid.size(), 0.0);
    spec.meta = params;
    spec.fixed_field = fixed_b;
    run_grid(spec.rates,
             [&](std::size_t i) {
                 // Both detunings shift rigidly with the scanned laser frequency.
                 ModelParams p = params;
                 p.detuning_1 = params.detuning_1 + spec.axis[i];
                 p.detuning_2 = params.detuning_2 + spec.axis[i];
                 return thermal_average(fixed_b, p, quad);
             },
             parallel);
    return spec;
}

} // namespace

Spectrum sweep_field(const std::vector<double>& b_grid,
                     std::pair<double, double> fixed_detunings,
                     const ModelParams& p, const QuadratureConfig& quad) {
    return sweep_field_impl(b_grid, fixed_detunings, p, quad, true);
}

Spectrum sweep_field_serial(const std::vector<double>& b_grid,
                            std::pair<double, double> fixed_detunings,
                            const ModelParams& p, const QuadratureConfig& quad) {
    return sweep_field_impl(b_grid, fixed_detunings, p, quad, false);
}

Spectrum sweep_detuning(const std::vector<double>& delta_grid, double fixed_b,
                        const ModelParams& p, const QuadratureConfig& quad) {
    return sweep_detuning_impl(delta_grid, fixed_b, p, quad, true);
}

Spectrum sweep_detuning_serial(const std::vector<double>& delta_grid, double fixed_b,
                               const ModelParams& p, const QuadratureConfig& quad) {
    return sweep_detuning_impl(delta_grid, fixed_b, p, quad, false);
}

} // namespace fanopa
