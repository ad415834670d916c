#pragma once

namespace fanopa {

// 2019 SI exact values plus CODATA-2018 derived ones.
inline constexpr double kBoltzmannSI  = 1.380649e-23;      // J/K
inline constexpr double kPlanckSI     = 6.62607015e-34;    // J s
inline constexpr double kHbarSI       = kPlanckSI / 6.283185307179586476925287; // h/2pi
inline constexpr double kAtomicMassSI = 1.66053906660e-27; // kg
inline constexpr double kCs133MassU   = 132.905451961;     // u
inline constexpr double kBohrRadiusSI = 5.29177210903e-11; // m

// Internal unit conventions: energies, linewidths and detunings are E/h in
// MHz; magnetic field in gauss; temperature in microkelvin; two-body rates
// in cm^3/s.
struct PhysicalConstants {
    double hbar_over_kB = kHbarSI / kBoltzmannSI;   // K s
    double kB_over_h    = kBoltzmannSI / kPlanckSI; // Hz/K
    double reduced_mass = 0.5 * kCs133MassU * kAtomicMassSI; // kg, Cs-Cs pair
    double bohr_radius  = kBohrRadiusSI;            // m
    double kB           = kBoltzmannSI;             // J/K
    double h            = kPlanckSI;                // J s

    static PhysicalConstants cs2() { return PhysicalConstants{}; }

    // Throws ValidationError on nonpositive entries or an inconsistent kB/h.
    void validate() const;

    // k_B T as E/h in MHz for T in microkelvin.
    double thermal_energy_mhz(double temperature_uK) const;

    // cm^3/s produced by one MHz of the Boltzmann-weighted |S|^2 integral,
    // i.e. the factor multiplying  integral dE exp(-E/kT) |S|^2  at T (uK).
    double thermal_rate_prefactor(double temperature_uK) const;

    // K_E = loss_rate_scale(E) * |S|^2 in cm^3/s at collision energy E (MHz).
    double loss_rate_scale(double collision_e_mhz) const;

    // k_B T / (h Q_T) in cm^3/s, with Q_T the translational partition
    // density; equals the thermal average when |S|^2 is energy independent.
    double constant_s2_rate(double temperature_uK) const;
};

} // namespace fanopa
