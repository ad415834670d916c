#pragma once

#include <string>
#include <vector>

#include "fanopa/constants.hpp"

namespace fanopa {

// Physical inputs of the coupled dual-resonance loss model. Linewidths and
// detunings are E/h in MHz; gamma_1/gamma_2 are the stimulated widths quoted
// at laser intensity intensity_ref, gamma_sp_* the spontaneous widths.
struct ModelParams {
    double gamma_f = 2.0;        // Feshbach resonance linewidth, MHz
    double gamma_1 = 0.0;        // stimulated width, bound state 1
    double gamma_2 = 0.0;        // stimulated width, bound state 2
    double gamma_sp_1 = 17.0;    // spontaneous width, bound state 1
    double gamma_sp_2 = 17.0;    // spontaneous width, bound state 2
    double q_1 = 0.0;            // Fano asymmetry, bound state 1
    double q_2 = 0.0;            // Fano asymmetry, bound state 2
    double detuning_1 = 0.0;     // effective detuning (static light shift folded in), MHz
    double detuning_2 = 0.0;
    double b0 = 47.97;           // resonance field, gauss
    double dmu = -2.0;           // differential magnetic moment, MHz/gauss
    double temperature = 3.5;    // microkelvin
    double k_bg = 0.0;           // off-resonant background rate, cm^3/s
    double intensity_ref = 1.0;  // W/cm^2

    PhysicalConstants constants = PhysicalConstants::cs2();

    // Throws ValidationError naming the offending field.
    void validate() const;
};

// Parameter names accepted by the model fitter.
const std::vector<std::string>& fittable_params();
bool is_fittable_param(const std::string& name);
double get_param(const ModelParams& p, const std::string& name);
void set_param(ModelParams& p, const std::string& name, double value);

// Default fit bounds for one parameter: widths and k_bg nonnegative,
// |q| <= 1e3, dmu keeps the sign of its initial value.
std::pair<double, double> default_param_bounds(const std::string& name, double initial);

} // namespace fanopa
