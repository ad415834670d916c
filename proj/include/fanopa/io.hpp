#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fanopa/analysis.hpp"
#include "fanopa/params.hpp"
#include "fanopa/spectrum.hpp"
#include "fanopa/trap_sim.hpp"

namespace fanopa {

struct GridSpec {
    double start = 0.0;
    double stop = 0.0;
    int count = 0;

    std::vector<double> values() const;
    void validate(const char* name) const; // count >= 2, start < stop
};

struct FitSpec {
    std::vector<std::string> free;
    ParamBounds bounds;
    std::string data_path;
    // Field a detuning-sweep dataset was taken at (defaults to model b0).
    std::optional<double> fixed_b;
};

struct ShiftScanSpec {
    std::vector<double> intensities;
    double fixed_b = 0.0;
};

struct DecaySpec {
    double n0 = 0.0;                 // cm^-3
    std::optional<double> k_av;      // cm^3/s; taken from the model at b_eval if absent
    std::optional<double> b_eval;    // gauss, for model-derived k_av (defaults to b0)
    double t_max = 0.0;              // s
    int points = 0;
    double noise_rel = 0.0;
};

struct RunConfig {
    ModelParams model;
    QuadratureConfig quadrature;
    std::optional<GridSpec> field_grid;
    std::optional<GridSpec> detuning_grid;
    std::optional<FitSpec> fit;
    std::optional<ShiftScanSpec> shift_scan;
    std::optional<DecaySpec> decay;
    std::string out_path;
    std::uint64_t seed = 0;
};

// Parses and fully validates a JSON run configuration; see README for the
// schema. Throws ParseError for malformed JSON and ValidationError naming
// the offending field otherwise.
RunConfig load_config(const std::string& path);

// Spectrum CSV: header "axis_gauss,K_av_cm3_s" (field sweep) or
// "axis_mhz,K_av_cm3_s" (detuning sweep), then one "%.16e,%.16e" row per
// point. Decay traces use "t_s,n_cm3". Writers stage to a temp file and
// rename, so no partial output survives an error; round trips are bit exact.
Spectrum read_spectrum_csv(const std::string& path);
void write_spectrum_csv(const Spectrum& spec, const std::string& path);

DecayTrace read_trace_csv(const std::string& path);
void write_trace_csv(const DecayTrace& trace, const std::string& path);

// Shift-scan output: header "intensity_w_cm2,center_mhz".
void write_shift_scan_csv(const ShiftScan& scan, const std::string& path);

} // namespace fanopa
