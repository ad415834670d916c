#include "fanopa/params.hpp"

#include <cmath>
#include <limits>

#include "fanopa/errors.hpp"

namespace fanopa {

void ModelParams::validate() const {
    constants.validate();
    auto finite = [](double v, const char* name) {
        if (!std::isfinite(v))
            throw ValidationError(std::string("ModelParams.") + name + " must be finite");
    };
    finite(gamma_f, "gamma_f");
    finite(gamma_1, "gamma_1");
    finite(gamma_2, "gamma_2");
    finite(gamma_sp_1, "gamma_sp_1");
    finite(gamma_sp_2, "gamma_sp_2");
    finite(q_1, "q_1");
    finite(q_2, "q_2");
    finite(detuning_1, "detuning_1");
    finite(detuning_2, "detuning_2");
    finite(b0, "b0");
    finite(dmu, "dmu");
    finite(temperature, "temperature");
    finite(k_bg, "k_bg");
    finite(intensity_ref, "intensity_ref");

    if (!(gamma_f > 0.0)) throw ValidationError("ModelParams.gamma_f must be > 0");
    if (gamma_1 < 0.0) throw ValidationError("ModelParams.gamma_1 must be >= 0");
    if (gamma_2 < 0.0) throw ValidationError("ModelParams.gamma_2 must be >= 0");
    // gamma_sp_n = 0 is allowed so a fully dark partner state (gamma_n = 0
    // too) can be switched off; poles that a vanishing spontaneous width can
    // expose are guarded at evaluation time.
    if (gamma_sp_1 < 0.0) throw ValidationError("ModelParams.gamma_sp_1 must be >= 0");
    if (gamma_sp_2 < 0.0) throw ValidationError("ModelParams.gamma_sp_2 must be >= 0");
    if (!(temperature > 0.0)) throw ValidationError("ModelParams.temperature must be > 0");
    if (k_bg < 0.0) throw ValidationError("ModelParams.k_bg must be >= 0");
    if (dmu == 0.0) throw ValidationError("ModelParams.dmu must be nonzero");
    if (!(intensity_ref > 0.0)) throw ValidationError("ModelParams.intensity_ref must be > 0");
}

const std::vector<std::string>& fittable_params() {
    static const std::vector<std::string> names = {
        "q_1", "q_2", "gamma_1", "gamma_2", "k_bg",
        "detuning_1", "detuning_2", "dmu", "b0",
    };
    return names;
}

bool is_fittable_param(const std::string& name) {
    for (const auto& n : fittable_params())
        if (n == name) return true;
    return false;
}

double get_param(const ModelParams& p, const std::string& name) {
    if (name == "q_1") return p.q_1;
    if (name == "q_2") return p.q_2;
    if (name == "gamma_1") return p.gamma_1;
    if (name == "gamma_2") return p.gamma_2;
    if (name == "k_bg") return p.k_bg;
    if (name == "detuning_1") return p.detuning_1;
    if (name == "detuning_2") return p.detuning_2;
    if (name == "dmu") return p.dmu;
    if (name == "b0") return p.b0;
    throw ValidationError("unknown model parameter '" + name + "'");
}

void set_param(ModelParams& p, const std::string& name, double value) {
    if (name == "q_1") { p.q_1 = value; return; }
    if (name == "q_2") { p.q_2 = value; return; }
    if (name == "gamma_1") { p.gamma_1 = value; return; }
    if (name == "gamma_2") { p.gamma_2 = value; return; }
    if (name == "k_bg") { p.k_bg = value; return; }
    if (name == "detuning_1") { p.detuning_1 = value; return; }
    if (name == "detuning_2") { p.detuning_2 = value; return; }
    if (name == "dmu") { p.dmu = value; return; }
    if (name == "b0") { p.b0 = value; return; }
    throw ValidationError("unknown model parameter '" + name + "'");
}

std::pair<double, double> default_param_bounds(const std::string& name, double initial) {
    const double inf = std::numeric_limits<double>::infinity();
    if (name == "gamma_1" || name == "gamma_2" || name == "k_bg")
        return {0.0, inf};
    if (name == "q_1" || name == "q_2")
        return {-1e3, 1e3};
    if (name == "dmu") {
        // keep the field-to-energy mapping nondegenerate
        if (initial > 0.0) return {1e-9, inf};
        return {-inf, -1e-9};
    }
    return {-inf, inf};
}

} // namespace fanopa
