#include "fanopa/trap_sim.hpp"

#include <cmath>
#include <random>

#include "fanopa/errors.hpp"

namespace fanopa {

void DecayTrace::validate() const {
    if (times.size() != densities.size())
        throw ValidationError("DecayTrace times and densities differ in length");
    if (times.empty())
        throw ValidationError("DecayTrace must not be empty");
    if (times.front() != 0.0)
        throw ValidationError("DecayTrace times must start at 0");
    for (std::size_t i = 1; i < times.size(); ++i)
        if (!(times[i] > times[i - 1]))
            throw ValidationError("DecayTrace times must be strictly increasing");
    for (double d : densities)
        if (!(d > 0.0) || !std::isfinite(d))
            throw ValidationError("DecayTrace densities must be positive and finite");
}

namespace {

void check_decay_inputs(double n0, double k_av, const std::vector<double>& times) {
    if (!(n0 > 0.0))
        throw ValidationError("decay integration requires n0 > 0");
    if (k_av < 0.0)
        throw ValidationError("decay integration requires k_av >= 0");
    if (times.empty() || times.front() != 0.0)
        throw ValidationError("decay times must start at 0");
    for (std::size_t i = 1; i < times.size(); ++i)
        if (!(times[i] > times[i - 1]))
            throw ValidationError("decay times must be strictly increasing");
}

} // namespace

DecayTrace integrate_decay(double n0, double k_av, const std::vector<double>& times) {
    check_decay_inputs(n0, k_av, times);
    DecayTrace trace;
    trace.n0 = n0;
    trace.times = times;
    trace.densities.resize(times.size());
    for (std::size_t i = 0; i < times.size(); ++i)
        trace.densities[i] = n0 / (1.0 + k_av * n0 * times[i]);
    return trace;
}

DecayTrace integrate_decay_rk4(double n0, const std::function<double(double)>& k_of_t,
                               const std::vector<double>& times, int steps_per_interval) {
    if (!(n0 > 0.0))
        throw ValidationError("decay integration requires n0 > 0");
    if (times.empty() || times.front() != 0.0)
        throw ValidationError("decay times must start at 0");
    if (steps_per_interval < 1)
        throw ValidationError("steps_per_interval must be >= 1");

    auto rhs = [&](double t, double n) { return -k_of_t(t) * n * n; };

    DecayTrace trace;
    trace.n0 = n0;
    trace.times = times;
    trace.densities.resize(times.size());
    double n = n0;
    trace.densities[0] = n;
    for (std::size_t i = 1; i < times.size(); ++i) {
        if (!(times[i] > times[i - 1]))
            throw ValidationError("decay times must be strictly increasing");
        const double h = (times[i] - times[i - 1]) / steps_per_interval;
        double t = times[i - 1];
        for (int s = 0; s < steps_per_interval; ++s) {
            const double k1 = rhs(t, n);
            const double k2 = rhs(t + 0.5 * h, n + 0.5 * h * k1);
            const double k3 = rhs(t + 0.5 * h, n + 0.5 * h * k2);
            const double k4 = rhs(t + h, n + h * k3);
            n += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            t += h;
        }
        trace.densities[i] = n;
    }
    return trace;
}

RateEstimate extract_k(const DecayTrace& trace) {
    if (trace.times.size() < 3)
        throw ValidationError("extract_k needs at least 3 points");
    for (double d : trace.densities)
        if (!(d > 0.0))
            throw ValidationError("extract_k requires positive densities");

    const std::size_t m = trace.times.size();
    // 1/n is exactly linear in t for pure two-body loss.
    double mt = 0.0, my = 0.0;
    std::vector<double> inv(m);
    for (std::size_t i = 0; i < m; ++i) {
        inv[i] = 1.0 / trace.densities[i];
        mt += trace.times[i];
        my += inv[i];
    }
    mt /= static_cast<double>(m);
    my /= static_cast<double>(m);
    double stt = 0.0, sty = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        stt += (trace.times[i] - mt) * (trace.times[i] - mt);
        sty += (trace.times[i] - mt) * (inv[i] - my);
    }
    const double slope = sty / stt;
    const double intercept = my - slope * mt;
    double ss = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double r = inv[i] - (intercept + slope * trace.times[i]);
        ss += r * r;
    }
    const double sigma = (m > 2) ? std::sqrt(ss / static_cast<double>(m - 2) / stt) : 0.0;
    if (slope < 0.0 && -slope > 2.0 * sigma)
        throw NegativeRate("fitted two-body rate is negative beyond 2 sigma; trace is not decaying");
    return RateEstimate{slope, sigma};
}

DecayTrace synthesize_trace(double n0, double k_av, const std::vector<double>& times,
                            double noise_rel, std::uint64_t seed) {
    if (noise_rel < 0.0)
        throw ValidationError("synthesize_trace requires noise_rel >= 0");
    DecayTrace trace = integrate_decay(n0, k_av, times);
    if (noise_rel == 0.0)
        return trace;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (double& d : trace.densities) {
        d *= 1.0 + noise_rel * gauss(rng);
        // imaging noise cannot make a density observation nonpositive
        d = std::max(d, 1e-12 * n0);
    }
    return trace;
}

} // namespace fanopa
