// Command-line driver for the coupled dual-resonance photoassociation loss
// model: field/detuning sweeps, spectral-shift scans, model fits, two-body
// decay simulation and the single-resonance minimum locator.

#include <algorithm>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fanopa/analysis.hpp"
#include "fanopa/errors.hpp"
#include "fanopa/io.hpp"
#include "fanopa/model_core.hpp"
#include "fanopa/spectrum.hpp"
#include "fanopa/trap_sim.hpp"

namespace {

using namespace fanopa;

struct CommonArgs {
    std::string config_path;
    std::string out_path;
    std::optional<std::uint64_t> seed;
    std::optional<int> quad_nodes;
};

struct GridOverride {
    std::optional<double> start, stop;
    std::optional<int> count;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "JSON run configuration")->required();
    cmd->add_option("--out", args.out_path, "output file (overrides io.out)");
    cmd->add_option("--seed", args.seed, "random seed (overrides config)");
    cmd->add_option("--quad-nodes", args.quad_nodes, "quadrature node count (overrides config)");
}

RunConfig load(const CommonArgs& args) {
    RunConfig cfg = load_config(args.config_path);
    if (!args.out_path.empty()) cfg.out_path = args.out_path;
    if (args.seed) cfg.seed = *args.seed;
    if (args.quad_nodes) {
        cfg.quadrature.node_count = *args.quad_nodes;
        cfg.quadrature.validate();
    }
    return cfg;
}

GridSpec apply_override(const std::optional<GridSpec>& base, const GridOverride& ovr,
                        const char* name) {
    GridSpec g = base.value_or(GridSpec{});
    if (ovr.start) g.start = *ovr.start;
    if (ovr.stop) g.stop = *ovr.stop;
    if (ovr.count) g.count = *ovr.count;
    if (!base && (!ovr.start || !ovr.stop || !ovr.count))
        throw ValidationError(std::string("no '") + name +
                              "' grid in the config and no complete override on the command line");
    g.validate(name);
    return g;
}

void require_out(const RunConfig& cfg) {
    if (cfg.out_path.empty())
        throw ValidationError("an output path is required (io.out or --out)");
}

struct Extremum {
    double axis;
    double rate;
};

std::pair<Extremum, Extremum> spectrum_extrema(const Spectrum& s) {
    std::size_t imax = 0, imin = 0;
    for (std::size_t i = 1; i < s.rates.size(); ++i) {
        if (s.rates[i] > s.rates[imax]) imax = i;
        if (s.rates[i] < s.rates[imin]) imin = i;
    }
    return {{s.axis[imax], s.rates[imax]}, {s.axis[imin], s.rates[imin]}};
}

int run_sweep_b(const CommonArgs& args, const GridOverride& ovr) {
    RunConfig cfg = load(args);
    require_out(cfg);
    const GridSpec grid = apply_override(cfg.field_grid, ovr, "grids.field");
    const Spectrum spec = sweep_field(grid.values(),
                                      {cfg.model.detuning_1, cfg.model.detuning_2},
                                      cfg.model, cfg.quadrature);
    write_spectrum_csv(spec, cfg.out_path);
    const auto [peak, dip] = spectrum_extrema(spec);
    std::printf("sweep-b: %d points, peak K=%.6e cm^3/s at B=%.6f G, "
                "minimum K=%.6e cm^3/s at B=%.6f G -> %s\n",
                grid.count, peak.rate, peak.axis, dip.rate, dip.axis, cfg.out_path.c_str());
    return 0;
}

int run_sweep_delta(const CommonArgs& args, const GridOverride& ovr,
                    std::optional<double> fixed_b_cli) {
    RunConfig cfg = load(args);
    require_out(cfg);
    const GridSpec grid = apply_override(cfg.detuning_grid, ovr, "grids.detuning");
    const double fixed_b = fixed_b_cli.value_or(cfg.model.b0);
    const Spectrum spec = sweep_detuning(grid.values(), fixed_b, cfg.model, cfg.quadrature);
    write_spectrum_csv(spec, cfg.out_path);
    const auto [peak, dip] = spectrum_extrema(spec);
    std::printf("sweep-delta: %d points at B=%.6f G, peak K=%.6e cm^3/s at delta=%.6f MHz, "
                "minimum K=%.6e cm^3/s at delta=%.6f MHz -> %s\n",
                grid.count, fixed_b, peak.rate, peak.axis, dip.rate, dip.axis,
                cfg.out_path.c_str());
    return 0;
}

int run_fit(const CommonArgs& args) {
    RunConfig cfg = load(args);
    if (!cfg.fit || cfg.fit->data_path.empty())
        throw ValidationError("fit requires a fit.data path in the config");
    if (cfg.fit->free.empty())
        throw ValidationError("fit requires a nonempty fit.free list");
    Spectrum data = read_spectrum_csv(cfg.fit->data_path);
    if (data.axis_kind == AxisKind::DetuningSweep)
        data.fixed_field = cfg.fit->fixed_b.value_or(cfg.model.b0);

    const FitResult fit =
        fit_model(data, cfg.model, cfg.fit->free, cfg.fit->bounds, cfg.quadrature);

    std::string summary = "fit: converged=1 iterations=" + std::to_string(fit.iterations) +
                          " residual=" + std::to_string(fit.residual_norm);
    char buf[128];
    for (std::size_t j = 0; j < fit.names.size(); ++j) {
        std::snprintf(buf, sizeof buf, " %s=%.8g+-%.3g", fit.names[j].c_str(), fit.values[j],
                      fit.sigma[j]);
        summary += buf;
    }
    std::printf("%s\n", summary.c_str());
    return 0;
}

int run_shift_scan(const CommonArgs& args, const GridOverride& delta_ovr) {
    RunConfig cfg = load(args);
    require_out(cfg);
    if (!cfg.shift_scan)
        throw ValidationError("shift-scan requires a shift_scan section in the config");
    const GridSpec grid = apply_override(cfg.detuning_grid, delta_ovr, "grids.detuning");
    ShiftScanOptions opts;
    opts.quad = cfg.quadrature;
    const ShiftScan scan = shift_scan(cfg.model, cfg.shift_scan->intensities,
                                      cfg.shift_scan->fixed_b, grid.values(), opts);
    write_shift_scan_csv(scan, cfg.out_path);
    std::printf("shift-scan: B=%.6f G, slope=%.6e +- %.3e MHz/(W/cm^2) over %zu intensities -> %s\n",
                cfg.shift_scan->fixed_b, scan.slope, scan.slope_sigma,
                scan.intensities.size(), cfg.out_path.c_str());
    return 0;
}

int run_decay(const CommonArgs& args) {
    RunConfig cfg = load(args);
    require_out(cfg);
    if (!cfg.decay)
        throw ValidationError("decay requires a decay section in the config");
    const DecaySpec& d = *cfg.decay;
    double k_av;
    if (d.k_av) {
        k_av = *d.k_av;
    } else {
        const double b = d.b_eval.value_or(cfg.model.b0);
        k_av = thermal_average(b, cfg.model, cfg.quadrature);
    }
    std::vector<double> times(static_cast<std::size_t>(d.points));
    for (int i = 0; i < d.points; ++i)
        times[static_cast<std::size_t>(i)] = d.t_max * i / (d.points - 1);
    const DecayTrace trace = synthesize_trace(d.n0, k_av, times, d.noise_rel, cfg.seed);
    write_trace_csv(trace, cfg.out_path);
    const RateEstimate est = extract_k(trace);
    std::printf("decay: n0=%.6e cm^-3, K=%.6e cm^3/s, extracted K=%.6e +- %.3e cm^3/s -> %s\n",
                d.n0, k_av, est.k_av, est.sigma, cfg.out_path.c_str());
    return 0;
}

int run_fano_min(const CommonArgs& args, int which) {
    RunConfig cfg = load(args);
    const double b_min = fano_minimum_field(cfg.model, which);
    std::printf("fano-min: bound state %d, minimum at B=%.6f G (q=%.6g)\n", which, b_min,
                which == 1 ? cfg.model.q_1 : cfg.model.q_2);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"coupled dual-resonance photoassociation loss model"};
    app.require_subcommand(1);

    CommonArgs common;
    GridOverride b_ovr, d_ovr;
    std::optional<double> fixed_b_cli;
    int fano_n = 1;

    CLI::App* sweep_b = app.add_subcommand("sweep-b", "loss rate vs magnetic field");
    add_common(sweep_b, common);
    sweep_b->add_option("--b-start", b_ovr.start, "field grid start (gauss)");
    sweep_b->add_option("--b-stop", b_ovr.stop, "field grid stop (gauss)");
    sweep_b->add_option("--b-count", b_ovr.count, "field grid point count");

    CLI::App* sweep_delta = app.add_subcommand("sweep-delta", "loss rate vs laser detuning");
    add_common(sweep_delta, common);
    sweep_delta->add_option("--delta-start", d_ovr.start, "detuning grid start (MHz)");
    sweep_delta->add_option("--delta-stop", d_ovr.stop, "detuning grid stop (MHz)");
    sweep_delta->add_option("--delta-count", d_ovr.count, "detuning grid point count");
    sweep_delta->add_option("--fixed-b", fixed_b_cli, "field the sweep is taken at (gauss)");

    CLI::App* fit = app.add_subcommand("fit", "fit model parameters to a spectrum CSV");
    add_common(fit, common);

    CLI::App* shift = app.add_subcommand("shift-scan", "peak position vs PA intensity");
    add_common(shift, common);
    shift->add_option("--delta-start", d_ovr.start, "detuning grid start (MHz)");
    shift->add_option("--delta-stop", d_ovr.stop, "detuning grid stop (MHz)");
    shift->add_option("--delta-count", d_ovr.count, "detuning grid point count");

    CLI::App* decay = app.add_subcommand("decay", "two-body decay trace");
    add_common(decay, common);

    CLI::App* fano_min = app.add_subcommand("fano-min", "single-resonance loss-minimum field");
    add_common(fano_min, common);
    fano_min->add_option("--state", fano_n, "bound state index (1 or 2)")
        ->check(CLI::Range(1, 2));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1; // usage problems are config errors
    }

    try {
        if (sweep_b->parsed()) return run_sweep_b(common, b_ovr);
        if (sweep_delta->parsed()) return run_sweep_delta(common, d_ovr, fixed_b_cli);
        if (fit->parsed()) return run_fit(common);
        if (shift->parsed()) return run_shift_scan(common, d_ovr);
        if (decay->parsed()) return run_decay(common);
        if (fano_min->parsed()) return run_fano_min(common, fano_n);
    } catch (const FitNonConvergence& e) {
        std::fprintf(stderr, "fanopa: fit did not converge: %s (best residual %.6e)\n", e.what(),
                     e.best.residual_norm);
        return static_cast<int>(e.category());
    } catch (const Error& e) {
        std::fprintf(stderr, "fanopa: error: %s\n", e.what());
        return static_cast<int>(e.category());
    } catch (const std::exception& e) {
        std::fprintf(stderr, "fanopa: unexpected error: %s\n", e.what());
        return 2;
    }
    return 0;
}
