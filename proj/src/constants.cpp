#include "fanopa/constants.hpp"

#include <cmath>
#include <string>

#include "fanopa/errors.hpp"

namespace fanopa {

void PhysicalConstants::validate() const {
    auto positive = [](double v, const char* name) {
        if (!(v > 0.0) || !std::isfinite(v))
            throw ValidationError(std::string("PhysicalConstants.") + name + " must be strictly positive");
    };
    positive(hbar_over_kB, "hbar_over_kB");
    positive(kB_over_h, "kB_over_h");
    positive(reduced_mass, "reduced_mass");
    positive(bohr_radius, "bohr_radius");
    positive(kB, "kB");
    positive(h, "h");
    const double ref = 2.0836619e10; // Hz/K
    if (std::abs(kB_over_h - ref) > 1e-3 * ref)
        throw ValidationError("PhysicalConstants.kB_over_h deviates more than 0.1% from " + std::to_string(ref));
}

double PhysicalConstants::thermal_energy_mhz(double temperature_uK) const {
    return kB_over_h * temperature_uK * 1e-12; // uK -> K is 1e-6, Hz -> MHz is 1e-6
}

double PhysicalConstants::thermal_rate_prefactor(double temperature_uK) const {
    const double t_kelvin = temperature_uK * 1e-6;
    const double hbar = hbar_over_kB * kB;
    const double num = 4.0 * M_PI * M_PI * hbar * hbar;        // J^2 s^2
    const double den = std::pow(2.0 * M_PI * reduced_mass * kB * t_kelvin, 1.5);
    // One MHz of integral is h * 1e6 joules; m^3 -> cm^3 is 1e6.
    return num / den * h * 1e6 * 1e6;
}

double PhysicalConstants::loss_rate_scale(double collision_e_mhz) const {
    if (!(collision_e_mhz > 0.0))
        throw DomainError("loss_rate_scale requires collision energy > 0 MHz");
    const double hbar = hbar_over_kB * kB;
    const double e_joule = collision_e_mhz * 1e6 * h;
    const double k_wavenumber = std::sqrt(2.0 * reduced_mass * e_joule) / hbar; // 1/m
    return M_PI * hbar / (reduced_mass * k_wavenumber) * 1e6; // cm^3/s
}

double PhysicalConstants::constant_s2_rate(double temperature_uK) const {
    const double t_kelvin = temperature_uK * 1e-6;
    const double q_t = std::pow(2.0 * M_PI * reduced_mass * kB * t_kelvin / (h * h), 1.5); // 1/m^3
    return kB * t_kelvin / (h * q_t) * 1e6; // cm^3/s
}

} // namespace fanopa
