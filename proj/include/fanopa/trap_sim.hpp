#pragma once

#include <cstdint>
#include <functional>
#include <vector>

namespace fanopa {

// Two-body decay trace: n(t) in cm^-3 at strictly increasing times starting
// at zero.
struct DecayTrace {
    std::vector<double> times;     // s
    std::vector<double> densities; // cm^-3
    double n0 = 0.0;               // cm^-3

    void validate() const;
};

// Exact two-body solution n(t) = n0 / (1 + K n0 t).
DecayTrace integrate_decay(double n0, double k_av, const std::vector<double>& times);

// RK4 path for a (possibly time-dependent) rate coefficient; matches the
// closed form for constant K.
DecayTrace integrate_decay_rk4(double n0, const std::function<double(double)>& k_of_t,
                               const std::vector<double>& times, int steps_per_interval = 64);

struct RateEstimate {
    double k_av = 0.0;  // cm^3/s
    double sigma = 0.0; // standard error
};

// Recovers K from 1/n(t) = 1/n0 + K t by linear regression. Throws
// NegativeRate when the fitted slope is negative beyond two standard errors.
RateEstimate extract_k(const DecayTrace& trace);

// integrate_decay plus i.i.d. multiplicative Gaussian noise, deterministic
// for a given seed.
DecayTrace synthesize_trace(double n0, double k_av, const std::vector<double>& times,
                            double noise_rel, std::uint64_t seed);

} // namespace fanopa
