#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fanopa/errors.hpp"
#include "fanopa/least_squares.hpp"
#include "fanopa/params.hpp"
#include "fanopa/spectrum.hpp"

namespace fanopa {

// Canonical asymmetric profile (eps + q)^2 / (eps^2 + 1).
double canonical_fano(double eps, double q);

// Field at which the reduced energy equals -q_n for bound state n, evaluated
// at the representative collision energy (k_B T unless overridden): the
// location of the single-resonance loss minimum.
double fano_minimum_field(const ModelParams& p, int n,
                          std::optional<double> representative_e = std::nullopt);

struct LorentzianFit {
    double center = 0.0;        // axis units
    double fwhm = 0.0;          // axis units
    double amplitude = 0.0;     // rate units
    double offset = 0.0;        // rate units
    double residual_norm = 0.0; // rate units
};

// Least-squares Lorentzian amplitude*(G/2)^2/((x-x0)^2+(G/2)^2)+offset around
// the global maximum (pass a window to fit a secondary peak instead).
// Throws NoPeak for monotone spectra, NonConvergence past the iteration cap.
LorentzianFit lorentzian_fit(const Spectrum& spec);
LorentzianFit lorentzian_fit(const Spectrum& spec, double window_lo, double window_hi);

struct ShiftScan {
    std::vector<double> intensities;    // W/cm^2
    std::vector<double> peak_positions; // MHz
    double slope = 0.0;                 // MHz/(W/cm^2)
    double slope_sigma = 0.0;
};

// How couplings respond to PA laser intensity in a shift scan. FixedQ scales
// the stimulated widths linearly and holds the asymmetry parameters fixed;
// RabiSqrtIntensity rebuilds q_n from bound-bound couplings scaling as
// sqrt(I) against continuum couplings scaling as sqrt(I) in the width.
enum class IntensityScaling { FixedQ, RabiSqrtIntensity };

struct ShiftScanOptions {
    IntensityScaling scaling = IntensityScaling::FixedQ;
    // Forward-mode inputs for RabiSqrtIntensity, quoted at intensity_ref.
    double omega_1 = 0.0, omega_2 = 0.0;    // MHz
    double v_eff_1 = 0.0, v_eff_2 = 0.0;    // MHz
    QuadratureConfig quad{};
    bool parallel = true;
};

// Peak position of the detuning sweep versus PA intensity, with the fitted
// linear slope. Lorentzian-fit failures carry the intensity index.
ShiftScan shift_scan(const ModelParams& p, const std::vector<double>& intensities,
                     double fixed_b, const std::vector<double>& delta_grid,
                     const ShiftScanOptions& opts = {});

struct FitResult {
    std::vector<std::string> names;
    std::vector<double> values;
    std::vector<double> sigma;
    double residual_norm = 0.0;
    int iterations = 0;
    bool converged = false;
    std::vector<double> residual_history;
    ModelParams params; // initial params with fitted values applied
};

struct FitNonConvergence : Error {
    FitNonConvergence(const std::string& m, FitResult best_so_far)
        : Error(ErrorCategory::fit, m), best(std::move(best_so_far)) {}
    FitResult best;
};

using ParamBounds = std::map<std::string, std::pair<double, double>>;

// Damped least squares of the forward model against a measured spectrum over
// the named free parameters. Bounds default per-parameter; the residual norm
// is non-increasing across accepted iterations (see residual_history).
FitResult fit_model(const Spectrum& data, const ModelParams& initial,
                    const std::vector<std::string>& free,
                    const ParamBounds& bounds = {},
                    const QuadratureConfig& quad = {});

} // namespace fanopa
