#include "fanopa/io.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "fanopa/errors.hpp"

namespace fanopa {

using nlohmann::json;

std::vector<double> GridSpec::values() const {
    std::vector<double> v(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i)
        v[static_cast<std::size_t>(i)] = start + (stop - start) * i / (count - 1);
    return v;
}

void GridSpec::validate(const char* name) const {
    if (count < 2)
        throw ValidationError(std::string(name) + ".count must be >= 2");
    if (!(start < stop))
        throw ValidationError(std::string(name) + ".start must be < stop");
    if (!std::isfinite(start) || !std::isfinite(stop))
        throw ValidationError(std::string(name) + " bounds must be finite");
}

namespace {

double require_number(const json& obj, const std::string& context, const std::string& key) {
    if (!obj.contains(key))
        throw ValidationError(context + "." + key + " is missing");
    if (!obj[key].is_number())
        throw ValidationError(context + "." + key + " must be a number");
    return obj[key].get<double>();
}

double number_or(const json& obj, const std::string& context, const std::string& key,
                 double fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_number())
        throw ValidationError(context + "." + key + " must be a number");
    return obj[key].get<double>();
}

ModelParams parse_model(const json& m) {
    static const char* known[] = {
        "gamma_f", "gamma_1", "gamma_2", "gamma_sp_1", "gamma_sp_2", "gamma_sp",
        "q_1", "q_2", "detuning_1", "detuning_2", "b0", "dmu",
        "temperature", "k_bg", "intensity_ref",
    };
    for (auto it = m.begin(); it != m.end(); ++it) {
        bool ok = false;
        for (const char* k : known)
            if (it.key() == k) { ok = true; break; }
        if (!ok)
            throw ValidationError("model." + it.key() + " is not a recognized parameter");
    }

    ModelParams p;
    p.gamma_f = require_number(m, "model", "gamma_f");
    p.gamma_1 = number_or(m, "model", "gamma_1", 0.0);
    p.gamma_2 = number_or(m, "model", "gamma_2", 0.0);
    // "gamma_sp" sets both spontaneous widths at once.
    const double sp_both = number_or(m, "model", "gamma_sp", 17.0);
    p.gamma_sp_1 = number_or(m, "model", "gamma_sp_1", sp_both);
    p.gamma_sp_2 = number_or(m, "model", "gamma_sp_2", sp_both);
    p.q_1 = number_or(m, "model", "q_1", 0.0);
    p.q_2 = number_or(m, "model", "q_2", 0.0);
    p.detuning_1 = number_or(m, "model", "detuning_1", 0.0);
    p.detuning_2 = number_or(m, "model", "detuning_2", 0.0);
    p.b0 = require_number(m, "model", "b0");
    p.dmu = require_number(m, "model", "dmu");
    p.temperature = require_number(m, "model", "temperature");
    p.k_bg = number_or(m, "model", "k_bg", 0.0);
    p.intensity_ref = number_or(m, "model", "intensity_ref", 1.0);
    p.validate();
    return p;
}

QuadratureConfig parse_quadrature(const json& q) {
    QuadratureConfig cfg;
    if (q.contains("node_count")) {
        if (!q["node_count"].is_number_integer())
            throw ValidationError("quadrature.node_count must be an integer");
        cfg.node_count = q["node_count"].get<int>();
    }
    cfg.energy_cutoff = number_or(q, "quadrature", "energy_cutoff", cfg.energy_cutoff);
    cfg.tolerance = number_or(q, "quadrature", "tolerance", cfg.tolerance);
    if (q.contains("scheme")) {
        const std::string s = q["scheme"].get<std::string>();
        if (s == "gauss-laguerre")
            cfg.scheme = QuadScheme::GaussLaguerre;
        else if (s == "adaptive-simpson")
            cfg.scheme = QuadScheme::AdaptiveSimpson;
        else
            throw ValidationError("quadrature.scheme must be 'gauss-laguerre' or 'adaptive-simpson'");
    }
    cfg.validate();
    return cfg;
}

GridSpec parse_grid(const json& g, const char* name) {
    GridSpec spec;
    spec.start = require_number(g, name, "start");
    spec.stop = require_number(g, name, "stop");
    if (!g.contains("count") || !g["count"].is_number_integer())
        throw ValidationError(std::string(name) + ".count must be an integer");
    spec.count = g["count"].get<int>();
    spec.validate(name);
    return spec;
}

} // namespace

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open config file '" + path + "'");
    json root;
    try {
        root = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ParseError("config '" + path + "': " + e.what());
    }
    if (!root.is_object())
        throw ParseError("config '" + path + "' must hold a JSON object");
    if (!root.contains("model") || !root["model"].is_object())
        throw ValidationError("config requires a 'model' object");

    RunConfig cfg;
    cfg.model = parse_model(root["model"]);
    if (root.contains("quadrature"))
        cfg.quadrature = parse_quadrature(root["quadrature"]);

    if (root.contains("grids")) {
        const json& grids = root["grids"];
        if (grids.contains("field"))
            cfg.field_grid = parse_grid(grids["field"], "grids.field");
        if (grids.contains("detuning"))
            cfg.detuning_grid = parse_grid(grids["detuning"], "grids.detuning");
    }

    if (root.contains("fit")) {
        const json& f = root["fit"];
        FitSpec fit;
        if (f.contains("free")) {
            for (const auto& name : f["free"]) {
                const std::string s = name.get<std::string>();
                if (!is_fittable_param(s))
                    throw ValidationError("fit.free: '" + s + "' is not a fittable parameter");
                fit.free.push_back(s);
            }
        }
        if (f.contains("bounds")) {
            for (auto it = f["bounds"].begin(); it != f["bounds"].end(); ++it) {
                if (!is_fittable_param(it.key()))
                    throw ValidationError("fit.bounds: '" + it.key() + "' is not a fittable parameter");
                const auto& pair = it.value();
                if (!pair.is_array() || pair.size() != 2)
                    throw ValidationError("fit.bounds." + it.key() + " must be [lo, hi]");
                fit.bounds[it.key()] = {pair[0].get<double>(), pair[1].get<double>()};
            }
        }
        if (f.contains("data"))
            fit.data_path = f["data"].get<std::string>();
        if (f.contains("fixed_b"))
            fit.fixed_b = require_number(f, "fit", "fixed_b");
        cfg.fit = std::move(fit);
    }

    if (root.contains("shift_scan")) {
        const json& s = root["shift_scan"];
        ShiftScanSpec scan;
        if (!s.contains("intensities") || !s["intensities"].is_array() || s["intensities"].size() < 2)
            throw ValidationError("shift_scan.intensities must be an array of >= 2 values");
        for (const auto& v : s["intensities"])
            scan.intensities.push_back(v.get<double>());
        for (std::size_t i = 0; i < scan.intensities.size(); ++i) {
            if (!(scan.intensities[i] > 0.0))
                throw ValidationError("shift_scan.intensities must be positive");
            if (i > 0 && !(scan.intensities[i] > scan.intensities[i - 1]))
                throw ValidationError("shift_scan.intensities must be strictly increasing");
        }
        scan.fixed_b = require_number(s, "shift_scan", "fixed_b");
        cfg.shift_scan = std::move(scan);
    }

    if (root.contains("decay")) {
        const json& d = root["decay"];
        DecaySpec spec;
        spec.n0 = require_number(d, "decay", "n0");
        if (!(spec.n0 > 0.0))
            throw ValidationError("decay.n0 must be > 0");
        if (d.contains("k_av")) spec.k_av = require_number(d, "decay", "k_av");
        if (d.contains("b_eval")) spec.b_eval = require_number(d, "decay", "b_eval");
        spec.t_max = require_number(d, "decay", "t_max");
        if (!(spec.t_max > 0.0))
            throw ValidationError("decay.t_max must be > 0");
        if (!d.contains("points") || !d["points"].is_number_integer())
            throw ValidationError("decay.points must be an integer");
        spec.points = d["points"].get<int>();
        if (spec.points < 3)
            throw ValidationError("decay.points must be >= 3");
        spec.noise_rel = number_or(d, "decay", "noise_rel", 0.0);
        if (spec.noise_rel < 0.0)
            throw ValidationError("decay.noise_rel must be >= 0");
        cfg.decay = std::move(spec);
    }

    if (root.contains("io")) {
        const json& io = root["io"];
        if (io.contains("out"))
            cfg.out_path = io["out"].get<std::string>();
    }
    if (root.contains("seed")) {
        if (!root["seed"].is_number_integer())
            throw ValidationError("seed must be an integer");
        cfg.seed = root["seed"].get<std::uint64_t>();
    }

    // Input files must exist up front.
    if (cfg.fit && !cfg.fit->data_path.empty() &&
        !std::filesystem::exists(cfg.fit->data_path))
        throw ValidationError("fit.data file '" + cfg.fit->data_path + "' does not exist");
    return cfg;
}

namespace {

constexpr const char* kSpectrumHeaderField = "axis_gauss,K_av_cm3_s";
constexpr const char* kSpectrumHeaderDetuning = "axis_mhz,K_av_cm3_s";
constexpr const char* kTraceHeader = "t_s,n_cm3";

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

double parse_csv_number(const std::string& field, const std::string& path, std::size_t line_no) {
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(field.c_str(), &end);
    if (end == field.c_str() || *end != '\0' || errno == ERANGE)
        throw SchemaError(path + ":" + std::to_string(line_no) + ": '" + field +
                          "' is not a valid number");
    return v;
}

// Writes through a temp file in the target directory and renames into place.
class AtomicWriter {
public:
    explicit AtomicWriter(const std::string& path) : path_(path) {
        tmp_ = path + ".tmp";
        file_ = std::fopen(tmp_.c_str(), "wb");
        if (!file_)
            throw IoError("cannot create '" + tmp_ + "': " + std::strerror(errno));
    }
    ~AtomicWriter() {
        if (file_) {
            std::fclose(file_);
            std::remove(tmp_.c_str());
        }
    }
    std::FILE* get() { return file_; }
    void commit() {
        if (std::fclose(file_) != 0) {
            file_ = nullptr;
            std::remove(tmp_.c_str());
            throw IoError("write to '" + tmp_ + "' failed");
        }
        file_ = nullptr;
        std::error_code ec;
        std::filesystem::rename(tmp_, path_, ec);
        if (ec) {
            std::remove(tmp_.c_str());
            throw IoError("cannot rename '" + tmp_ + "' to '" + path_ + "': " + ec.message());
        }
    }

private:
    std::string path_, tmp_;
    std::FILE* file_ = nullptr;
};

void read_two_columns(const std::string& path, const char* expect_header_a,
                      const char* expect_header_b, std::string& header_found,
                      std::vector<double>& col1, std::vector<double>& col2) {
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open '" + path + "'");
    std::string line;
    if (!std::getline(in, line))
        throw SchemaError(path + ": empty file, expected a header row");
    while (!line.empty() && (line.back() == '\r' || line.back() == '\n'))
        line.pop_back();
    if (line != expect_header_a && (expect_header_b == nullptr || line != expect_header_b)) {
        const auto cols = split_csv_line(line);
        const auto expected = split_csv_line(expect_header_a);
        if (cols.size() > expected.size())
            throw SchemaError(path + ": unexpected extra column '" + cols[expected.size()] + "'");
        throw SchemaError(path + ": header '" + line + "' does not match the schema");
    }
    header_found = line;

    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != 2) {
            if (fields.size() > 2)
                throw SchemaError(path + ":" + std::to_string(line_no) +
                                  ": unexpected extra column '" + fields[2] + "'");
            throw SchemaError(path + ":" + std::to_string(line_no) + ": expected 2 columns, got " +
                              std::to_string(fields.size()));
        }
        col1.push_back(parse_csv_number(fields[0], path, line_no));
        col2.push_back(parse_csv_number(fields[1], path, line_no));
    }
}

} // namespace

Spectrum read_spectrum_csv(const std::string& path) {
    std::string header;
    std::vector<double> axis, rates;
    read_two_columns(path, kSpectrumHeaderField, kSpectrumHeaderDetuning, header, axis, rates);

    Spectrum spec;
    spec.axis_kind = (header == kSpectrumHeaderField) ? AxisKind::FieldSweep
                                                      : AxisKind::DetuningSweep;
    spec.axis = std::move(axis);
    spec.rates = std::move(rates);
    for (std::size_t i = 1; i < spec.axis.size(); ++i)
        if (!(spec.axis[i] > spec.axis[i - 1]))
            throw MonotonicityError(path + ": axis is not strictly increasing at row " +
                                    std::to_string(i + 1));
    return spec;
}

void write_spectrum_csv(const Spectrum& spec, const std::string& path) {
    spec.validate();
    AtomicWriter writer(path);
    std::fprintf(writer.get(), "%s\n",
                 spec.axis_kind == AxisKind::FieldSweep ? kSpectrumHeaderField
                                                        : kSpectrumHeaderDetuning);
    for (std::size_t i = 0; i < spec.axis.size(); ++i)
        std::fprintf(writer.get(), "%.16e,%.16e\n", spec.axis[i], spec.rates[i]);
    writer.commit();
}

DecayTrace read_trace_csv(const std::string& path) {
    std::string header;
    std::vector<double> times, densities;
    read_two_columns(path, kTraceHeader, nullptr, header, times, densities);
    DecayTrace trace;
    trace.times = std::move(times);
    trace.densities = std::move(densities);
    trace.n0 = trace.densities.empty() ? 0.0 : trace.densities.front();
    for (std::size_t i = 1; i < trace.times.size(); ++i)
        if (!(trace.times[i] > trace.times[i - 1]))
            throw MonotonicityError(path + ": time axis is not strictly increasing at row " +
                                    std::to_string(i + 1));
    return trace;
}

void write_trace_csv(const DecayTrace& trace, const std::string& path) {
    AtomicWriter writer(path);
    std::fprintf(writer.get(), "%s\n", kTraceHeader);
    for (std::size_t i = 0; i < trace.times.size(); ++i)
        std::fprintf(writer.get(), "%.16e,%.16e\n", trace.times[i], trace.densities[i]);
    writer.commit();
}

void write_shift_scan_csv(const ShiftScan& scan, const std::string& path) {
    AtomicWriter writer(path);
    std::fprintf(writer.get(), "intensity_w_cm2,center_mhz\n");
    for (std::size_t i = 0; i < scan.intensities.size(); ++i)
        std::fprintf(writer.get(), "%.16e,%.16e\n", scan.intensities[i], scan.peak_positions[i]);
    writer.commit();
}

} // namespace fanopa
