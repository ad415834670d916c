#include "fanopa/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fanopa/model_core.hpp"

namespace fanopa {

double canonical_fano(double eps, double q) {
    const double num = eps + q;
    return num * num / (eps * eps + 1.0);
}

double fano_minimum_field(const ModelParams& p, int n, std::optional<double> representative_e) {
    if (p.dmu == 0.0)
        throw DomainError("fano_minimum_field requires dmu != 0");
    const double q_n = (n == 1) ? p.q_1 : p.q_2;
    const double e_rep = representative_e.value_or(p.constants.thermal_energy_mhz(p.temperature));
    // eps(E_rep, B) = -q_n  <=>  E_c = E_rep + q_n * gamma_f / 2.
    return p.b0 + (e_rep + 0.5 * q_n * p.gamma_f) / p.dmu;
}

namespace {

struct PeakSeed {
    std::size_t lo, hi, argmax;
    double fwhm_guess;
};

PeakSeed locate_peak(const Spectrum& spec, double window_lo, double window_hi) {
    const auto& x = spec.axis;
    const auto& y = spec.rates;
    std::size_t lo = 0, hi = x.size();
    while (lo < hi && x[lo] < window_lo) ++lo;
    while (hi > lo && x[hi - 1] > window_hi) --hi;
    if (hi - lo < 5)
        throw NoPeak("lorentzian_fit window holds fewer than 5 points");

    std::size_t arg = lo;
    for (std::size_t i = lo; i < hi; ++i)
        if (y[i] > y[arg]) arg = i;
    if (arg == lo || arg == hi - 1)
        throw NoPeak("spectrum is monotone over the fit window");

    double ymin = y[lo];
    for (std::size_t i = lo; i < hi; ++i) ymin = std::min(ymin, y[i]);
    const double half = ymin + 0.5 * (y[arg] - ymin);
    if (!(y[arg] > ymin))
        throw NoPeak("spectrum is flat over the fit window");

    double xl = x[lo], xr = x[hi - 1];
    for (std::size_t i = arg; i-- > lo;)
        if (y[i] <= half) {
            xl = x[i];
            break;
        }
    for (std::size_t i = arg + 1; i < hi; ++i)
        if (y[i] <= half) {
            xr = x[i];
            break;
        }
    PeakSeed seed{lo, hi, arg, xr - xl};
    if (!(seed.fwhm_guess > 0.0))
        seed.fwhm_guess = (x[hi - 1] - x[lo]) / 4.0;
    return seed;
}

} // namespace

LorentzianFit lorentzian_fit(const Spectrum& spec) {
    return lorentzian_fit(spec, -std::numeric_limits<double>::infinity(),
                          std::numeric_limits<double>::infinity());
}

LorentzianFit lorentzian_fit(const Spectrum& spec, double window_lo, double window_hi) {
    if (spec.axis.size() < 5)
        throw NoPeak("lorentzian_fit needs at least 5 points");
    const PeakSeed seed = locate_peak(spec, window_lo, window_hi);
    const auto& x = spec.axis;
    const auto& y = spec.rates;

    double ymin = y[seed.lo];
    for (std::size_t i = seed.lo; i < seed.hi; ++i) ymin = std::min(ymin, y[i]);

    // Parameters: center, fwhm, amplitude, offset.
    std::vector<double> p0 = {x[seed.argmax], seed.fwhm_guess, y[seed.argmax] - ymin, ymin};
    const double span = x[seed.hi - 1] - x[seed.lo];
    const double yscale = std::max(y[seed.argmax] - ymin, 1e-300);
    std::vector<double> lower = {x[seed.lo], span * 1e-9, 0.0,
                                 -std::numeric_limits<double>::infinity()};
    std::vector<double> upper = {x[seed.hi - 1], 10.0 * span,
                                 std::numeric_limits<double>::infinity(),
                                 std::numeric_limits<double>::infinity()};
    std::vector<double> scales = {span, span, yscale, yscale};

    auto residuals = [&](const std::vector<double>& p) {
        std::vector<double> r(seed.hi - seed.lo);
        const double hw2 = 0.25 * p[1] * p[1]; // (fwhm/2)^2
        for (std::size_t i = seed.lo; i < seed.hi; ++i) {
            const double dx = x[i] - p[0];
            r[i - seed.lo] = p[2] * hw2 / (dx * dx + hw2) + p[3] - y[i];
        }
        return r;
    };

    LeastSquaresOptions opts;
    opts.max_iterations = 400;
    const LeastSquaresResult res = levenberg_marquardt(residuals, p0, lower, upper, scales, opts);
    if (!res.converged)
        throw NonConvergence("lorentzian_fit hit the iteration cap");

    LorentzianFit fit;
    fit.center = res.params[0];
    fit.fwhm = std::abs(res.params[1]);
    fit.amplitude = res.params[2];
    fit.offset = res.params[3];
    fit.residual_norm = res.residual_norm;
    return fit;
}

ShiftScan shift_scan(const ModelParams& p, const std::vector<double>& intensities,
                     double fixed_b, const std::vector<double>& delta_grid,
                     const ShiftScanOptions& opts) {
    if (intensities.empty())
        throw ValidationError("shift_scan needs at least one intensity");
    for (std::size_t i = 0; i < intensities.size(); ++i) {
        if (!(intensities[i] > 0.0))
            throw ValidationError("shift_scan intensities must be positive");
        if (i > 0 && !(intensities[i] > intensities[i - 1]))
            throw ValidationError("shift_scan intensities must be strictly increasing");
    }
    p.validate();

    ShiftScan scan;
    scan.intensities = intensities;
    scan.peak_positions.assign(intensities.size(), 0.0);

    std::exception_ptr first_error = nullptr;
    long first_error_index = static_cast<long>(intensities.size());
    const long n = static_cast<long>(intensities.size());
#pragma omp parallel for schedule(static) if (opts.parallel && n > 1)
    for (long i = 0; i < n; ++i) {
        try {
            const double ratio = intensities[static_cast<std::size_t>(i)] / p.intensity_ref;
            ModelParams scaled = p;
            scaled.gamma_1 = p.gamma_1 * ratio; // stimulated widths grow linearly
            scaled.gamma_2 = p.gamma_2 * ratio;
            scaled.intensity_ref = intensities[static_cast<std::size_t>(i)];
            if (opts.scaling == IntensityScaling::RabiSqrtIntensity) {
                const double amp = std::sqrt(ratio); // bound-bound Rabi couplings
                if (scaled.gamma_1 > 0.0)
                    scaled.q_1 = forward_q(opts.omega_1 * amp, opts.v_eff_1,
                                           scaled.gamma_1, scaled.gamma_f);
                if (scaled.gamma_2 > 0.0)
                    scaled.q_2 = forward_q(opts.omega_2 * amp, opts.v_eff_2,
                                           scaled.gamma_2, scaled.gamma_f);
            }
            const Spectrum spec = sweep_detuning_serial(delta_grid, fixed_b, scaled, opts.quad);
            scan.peak_positions[static_cast<std::size_t>(i)] = lorentzian_fit(spec).center;
        } catch (...) {
#pragma omp critical(fanopa_shift_scan_error)
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
            throw Error(e.category(), "at intensity index " + std::to_string(first_error_index) +
                                          ": " + e.what());
        }
    }

    if (intensities.size() >= 2) {
        const LinearFit lf = linear_regression(scan.intensities, scan.peak_positions);
        scan.slope = lf.slope;
        scan.slope_sigma = lf.slope_sigma;
    }
    return scan;
}

namespace {

std::vector<double> forward_rates(const Spectrum& data, const ModelParams& p,
                                  const QuadratureConfig& quad) {
    std::vector<double> out(data.axis.size());
    if (data.axis_kind == AxisKind::FieldSweep) {
        for (std::size_t i = 0; i < data.axis.size(); ++i)
            out[i] = thermal_average(data.axis[i], p, quad);
    } else {
        if (!std::isfinite(data.fixed_field))
            throw ValidationError("detuning-sweep data needs a finite fixed_field to fit");
        for (std::size_t i = 0; i < data.axis.size(); ++i) {
            ModelParams shifted = p;
            shifted.detuning_1 = p.detuning_1 + data.axis[i];
            shifted.detuning_2 = p.detuning_2 + data.axis[i];
            out[i] = thermal_average(data.fixed_field, shifted, quad);
        }
    }
    return out;
}

double fit_scale_for(const std::string& name, const ModelParams& initial) {
    if (name == "k_bg") {
        const double s = std::abs(initial.k_bg);
        return s > 0.0 ? s : 1e-12;
    }
    if (name == "b0") return std::max(1e-3, 1e-3 * std::abs(initial.b0));
    if (name == "dmu") return std::max(1e-2, 1e-2 * std::abs(initial.dmu));
    return 1.0; // q's, widths, detunings: MHz-scale quantities
}

} // namespace

FitResult fit_model(const Spectrum& data, const ModelParams& initial,
                    const std::vector<std::string>& free,
                    const ParamBounds& bounds, const QuadratureConfig& quad) {
    data.validate();
    initial.validate();
    quad.validate();
    for (const auto& name : free)
        if (!is_fittable_param(name))
            throw ValidationError("fit_model: '" + name + "' is not a fittable parameter");

    const int n = static_cast<int>(free.size());
    std::vector<double> p0(n), lower(n), upper(n), scales(n);
    for (int j = 0; j < n; ++j) {
        p0[j] = get_param(initial, free[j]);
        auto bound = default_param_bounds(free[j], p0[j]);
        if (auto it = bounds.find(free[j]); it != bounds.end())
            bound = it->second;
        lower[j] = bound.first;
        upper[j] = bound.second;
        scales[j] = fit_scale_for(free[j], initial);
    }

    auto apply = [&](const std::vector<double>& x) {
        ModelParams p = initial;
        for (int j = 0; j < n; ++j) set_param(p, free[j], x[j]);
        return p;
    };
    auto residuals = [&](const std::vector<double>& x) {
        const ModelParams p = apply(x);
        const std::vector<double> model = forward_rates(data, p, quad);
        std::vector<double> r(model.size());
        for (std::size_t i = 0; i < model.size(); ++i)
            r[i] = model[i] - data.rates[i];
        return r;
    };

    const LeastSquaresResult res = levenberg_marquardt(residuals, p0, lower, upper, scales);

    FitResult fit;
    fit.names = free;
    fit.values = res.params;
    fit.sigma = res.sigma;
    fit.residual_norm = res.residual_norm;
    fit.iterations = res.iterations;
    fit.converged = res.converged;
    fit.residual_history = res.residual_history;
    fit.params = apply(res.params);
    if (!res.converged)
        throw FitNonConvergence("fit_model hit the iteration cap", fit);
    return fit;
}

} // namespace fanopa
