#pragma once

#include <functional>
#include <limits>
#include <utility>
#include <vector>

#include "fanopa/model_core.hpp"
#include "fanopa/params.hpp"

namespace fanopa {

enum class AxisKind { FieldSweep, DetuningSweep };
enum class QuadScheme { GaussLaguerre, AdaptiveSimpson };

struct QuadratureConfig {
    int node_count = 64;          // Gauss-Laguerre order / Simpson seed panels
    double energy_cutoff = 30.0;  // upper limit in multiples of k_B T
    QuadScheme scheme = QuadScheme::GaussLaguerre;
    double tolerance = 1e-9;      // relative, adaptive scheme

    void validate() const;
};

// A sampled loss-rate curve over magnetic field (gauss) or laser detuning
// (MHz), together with the parameters that produced it.
struct Spectrum {
    AxisKind axis_kind = AxisKind::FieldSweep;
    std::vector<double> axis;
    std::vector<double> rates;   // cm^3/s
    ModelParams meta;
    // Field at which a detuning sweep was taken; NaN for field sweeps.
    double fixed_field = std::numeric_limits<double>::quiet_NaN();

    void validate() const;
};

// Decay-channel S-matrix element -2*pi*i (v_art_1 a_1 + v_art_2 a_2).
// Throws UnitarityViolation when |S|^2 exceeds 1 + 1e-6; |S|^2 in
// (1 + 1e-9, 1 + 1e-6] emits a one-time warning on stderr.
Complex s_decay(const DressedAmplitudes& amps, const ModelParams& p);

// Loss rate at a single collision energy (MHz) and field, cm^3/s.
double loss_rate_at_energy(double collision_e, double b_field, const ModelParams& p);

// Boltzmann-averaged loss rate at b_field plus the k_bg background, cm^3/s.
double thermal_average(double b_field, const ModelParams& p, const QuadratureConfig& quad);

// Closed-form thermal estimate sampling |S|^2 at one collision energy.
double approx_thermal(double b_field, double collision_e_eval, const ModelParams& p);

// integral dE exp(-E/kT) s2(E), MHz; shared by thermal_average and tests.
double boltzmann_weighted_integral(const std::function<double(double)>& s2,
                                   double kT_mhz, const QuadratureConfig& quad);

// Grid sweeps. The parallel versions distribute grid points over OpenMP
// threads writing to pre-assigned slots; the serial versions are the
// reference implementation and produce bit-identical output.
Spectrum sweep_field(const std::vector<double>& b_grid,
                     std::pair<double, double> fixed_detunings,
                     const ModelParams& p, const QuadratureConfig& quad);
Spectrum sweep_field_serial(const std::vector<double>& b_grid,
                            std::pair<double, double> fixed_detunings,
                            const ModelParams& p, const QuadratureConfig& quad);

Spectrum sweep_detuning(const std::vector<double>& delta_grid, double fixed_b,
                        const ModelParams& p, const QuadratureConfig& quad);
Spectrum sweep_detuning_serial(const std::vector<double>& delta_grid, double fixed_b,
                               const ModelParams& p, const QuadratureConfig& quad);

} // namespace fanopa
