#pragma once

#include <complex>
#include <functional>
#include <utility>
#include <vector>

#include "fanopa/params.hpp"

namespace fanopa {

using Complex = std::complex<double>;

// Closed-channel bound-state energy E_c = dmu * (B - b0), MHz.
double closed_channel_energy(double b_field, const ModelParams& p);

// Dimensionless reduced energy (E - E_c - E_c_shift) / (gamma_f / 2).
double reduced_energy(double collision_e, double e_c, double e_c_shift, double gamma_f);

// Flat s-wave couplings in sqrt(MHz): continuum<->closed bound state (v00),
// continuum<->excited bound states (lambda_n), excited<->decay channel (v_art_n).
struct SWaveCouplings {
    double v00;
    double lambda_1;
    double lambda_2;
    double v_art_1;
    double v_art_2;
};
SWaveCouplings s_wave_couplings(const ModelParams& p);

// Coupling-weighted Fano profile R_n = lambda_n * (eps + q_n) / (eps + i).
Complex fano_profile_r(double eps, double q_n, const ModelParams& p, int n);

// Complex self-energy of excited state n from interference with the
// Feshbach-dressed continuum: (q_n - i)^2 gamma_n / (2 (eps + i)).
// Its real part shifts the line; -2 x imag corrects the stimulated width.
Complex e_q_complex(double eps, int n, const ModelParams& p);

// Laser-induced plus vacuum-induced coupling between the two excited bound
// states; returns (Q_12, Q_21), equal for real couplings.
std::pair<Complex, Complex> cross_coupling(double eps, const ModelParams& p);

struct DressedAmplitudes {
    Complex a_1, a_2;    // excited-state amplitudes, 1/sqrt(MHz)
    Complex b_e;         // closed-channel amplitude, 1/sqrt(MHz)
    Complex xi_1, xi_2;  // single-resonance denominators, MHz
    Complex q_12, q_21;  // cross couplings, MHz
    Complex d_1, d_2;    // coupled denominators, MHz
    Complex r_1, r_2;    // coupling-weighted profiles, sqrt(MHz)
};

// Solves the coupled two-state amplitude equations at reduced energy eps and
// collision energy collision_e (MHz). Throws SingularDenominator when the
// evaluation lands on a pole (possible only for vanishing spontaneous width).
DressedAmplitudes dressed_amplitudes(double eps, double collision_e, const ModelParams& p);

// Real coupling strength as a function of collision energy on [e_min, e_max].
struct CouplingProfile {
    std::function<double(double)> value;
    double e_min = 0.0;
    double e_max = 0.0;
};

// Piecewise-linear profile through (energies[i], values[i]).
CouplingProfile sampled_profile(std::vector<double> energies, std::vector<double> values);

// Principal-value integral of v(E') * lambda(E') / (e - E') over the common
// domain, by symmetric excision around e with the excision half-width driven
// to convergence. Throws DomainError if e is not strictly inside the domain.
double principal_value_coupling(const CouplingProfile& v_profile,
                                const CouplingProfile& lambda_profile,
                                double e,
                                double rel_tol = 1e-9);

// Fano asymmetry parameter from the bare bound-bound coupling omega_n and the
// continuum-mediated coupling v_eff: (omega_n + v_eff) / (sqrt(gamma_n gamma_f)/2).
double forward_q(double omega_n, double v_eff, double gamma_n, double gamma_f);

namespace detail {
// im_sign = -1 replaces i by -i throughout the assembled algebra; the
// conjugation-symmetry tests rely on it. Public calls use im_sign = +1.
DressedAmplitudes dressed_amplitudes_signed(double eps, double collision_e,
                                            const ModelParams& p, double im_sign);
} // namespace detail

} // namespace fanopa
