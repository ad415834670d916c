// Acceptance suite: one deterministic pass/fail line per criterion, with the
// tolerance and runtime budgets pinned in code. Exit status is the number of
// failed criteria.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "fanopa/analysis.hpp"
#include "fanopa/errors.hpp"
#include "fanopa/model_core.hpp"
#include "fanopa/params.hpp"
#include "fanopa/spectrum.hpp"
#include "fanopa/trap_sim.hpp"

using namespace fanopa;

namespace {

int g_failures = 0;

struct Stopwatch {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
};

void report(int index, const char* name, bool pass, const std::string& detail, double secs) {
    std::printf("[%s] %2d. %-28s %s (%.2f s)\n", pass ? "PASS" : "FAIL", index, name,
                detail.c_str(), secs);
    if (!pass) ++g_failures;
}

std::string fmt(const char* f, double a, double b = 0.0) {
    char buf[160];
    std::snprintf(buf, sizeof buf, f, a, b);
    return buf;
}

ModelParams pa_level_params(int which) {
    ModelParams p;
    p.gamma_f = 2.0;
    p.gamma_sp_1 = 17.0;
    p.gamma_sp_2 = 17.0;
    p.detuning_1 = 2.3;
    p.detuning_2 = 1.3;
    p.b0 = 47.97;
    p.dmu = -2.0;
    p.temperature = 3.5;
    p.k_bg = 1e-12;
    switch (which) {
        case 0: p.gamma_1 = 15.5; p.gamma_2 = 0.04;  p.q_1 = -0.3; p.q_2 = 21.69; break;
        case 1: p.gamma_1 = 10.5; p.gamma_2 = 0.001; p.q_1 = 0.3;  p.q_2 = 21.69; break;
        default: p.gamma_1 = 6.2; p.gamma_2 = 0.3;   p.q_1 = 3.37; p.q_2 = 7.82;  break;
    }
    return p;
}

// Field grid mapped from a reduced-energy window at the representative
// collision energy k_B T; always ascending regardless of the dmu sign.
std::vector<double> grid_from_eps(const ModelParams& p, double e0, double e1, int n) {
    const double kT = p.constants.thermal_energy_mhz(p.temperature);
    std::vector<double> b(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const double eps = e0 + (e1 - e0) * i / (n - 1);
        b[static_cast<std::size_t>(i)] = p.b0 + (kT - 0.5 * eps * p.gamma_f) / p.dmu;
    }
    std::sort(b.begin(), b.end());
    return b;
}

double eps_of_field(const ModelParams& p, double b) {
    const double kT = p.constants.thermal_energy_mhz(p.temperature);
    return (kT - p.dmu * (b - p.b0)) / (0.5 * p.gamma_f);
}

// Discrete local maxima of the sampled curve, endpoints included when they
// exceed their single neighbor.
int count_maxima(const std::vector<double>& y) {
    int c = 0;
    const std::size_t n = y.size();
    for (std::size_t i = 0; i < n; ++i) {
        const bool left = (i == 0) || y[i] > y[i - 1];
        const bool right = (i + 1 == n) || y[i] > y[i + 1];
        if (left && right) ++c;
    }
    return c;
}

int count_interior_minima(const std::vector<double>& y) {
    int c = 0;
    for (std::size_t i = 1; i + 1 < y.size(); ++i)
        if (y[i] < y[i - 1] && y[i] < y[i + 1]) ++c;
    return c;
}

// Baseline-subtracted left/right area imbalance in a +-width window (reduced
// energy units) around the tallest interior maximum.
double area_imbalance(const Spectrum& s, const ModelParams& p, double width) {
    std::size_t best = 0;
    double best_v = -1.0;
    for (std::size_t i = 1; i + 1 < s.rates.size(); ++i)
        if (s.rates[i] > s.rates[i - 1] && s.rates[i] > s.rates[i + 1] && s.rates[i] > best_v) {
            best_v = s.rates[i];
            best = i;
        }
    const double center = eps_of_field(p, s.axis[best]);
    double low = 1e300;
    for (std::size_t i = 0; i < s.rates.size(); ++i)
        if (std::abs(eps_of_field(p, s.axis[i]) - center) <= width)
            low = std::min(low, s.rates[i]);
    double left = 0.0, right = 0.0;
    for (std::size_t i = 0; i < s.rates.size(); ++i) {
        const double eps = eps_of_field(p, s.axis[i]);
        if (std::abs(eps - center) > width) continue;
        const double v = s.rates[i] - low;
        if (eps < center) left += v;
        if (eps > center) right += v;
    }
    return std::abs(left - right) / (left + right);
}

ModelParams random_valid(std::mt19937_64& rng) {
    auto uni = [&](double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); };
    ModelParams p;
    p.gamma_f = uni(0.5, 25.0);
    p.gamma_1 = uni(0.0, 25.0);
    p.gamma_2 = uni(0.0, 8.0);
    p.gamma_sp_1 = uni(1.0, 30.0);
    p.gamma_sp_2 = uni(1.0, 30.0);
    p.q_1 = uni(-25.0, 25.0);
    p.q_2 = uni(-25.0, 25.0);
    p.detuning_1 = uni(-30.0, 30.0);
    p.detuning_2 = uni(-30.0, 30.0);
    p.temperature = uni(1.0, 5.0);
    return p;
}

// 1. |F_n|^2 equals the canonical profile on a 100x100 grid to 1e-12.
void criterion_1() {
    Stopwatch sw;
    ModelParams p = pa_level_params(0);
    const auto c = s_wave_couplings(p);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        const double eps = -50.0 + 100.0 * i / 99.0;
        for (int j = 0; j < 100; ++j) {
            const double q = -25.0 + 50.0 * j / 99.0;
            const double canon = canonical_fano(eps, q);
            const double prof = std::norm(fano_profile_r(eps, q, p, 1)) / (c.lambda_1 * c.lambda_1);
            worst = std::max(worst, std::abs(canon - prof) / (canon + 1.0));
        }
    }
    const double secs = sw.seconds();
    report(1, "canonical-profile match", worst < 1e-12 && secs < 1.0,
           fmt("max deviation %.2e", worst), secs);
}

// 2. Single-resonance sweep minimum at eps = -q1 within one step of a
//    10^4-point grid, 20 random parameter sets.
void criterion_2() {
    Stopwatch sw;
    std::mt19937_64 rng(20260808);
    auto uni = [&](double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); };
    QuadratureConfig quad;
    double worst_steps = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        ModelParams p;
        p.gamma_f = uni(4.0, 20.0);
        p.gamma_1 = uni(2.0, 20.0);
        p.gamma_2 = 0.0;
        p.gamma_sp_1 = uni(8.0, 25.0);
        p.gamma_sp_2 = 0.0;
        p.q_1 = uni(-5.0, 5.0);
        p.q_2 = 0.0;
        p.detuning_1 = uni(-10.0, 10.0);
        p.detuning_2 = 0.0;
        p.dmu = (uni(0.0, 1.0) < 0.5 ? -1.0 : 1.0) * uni(1.0, 5.0);
        p.temperature = uni(1.0, 5.0);
        const auto grid = grid_from_eps(p, -p.q_1 - 45.0, -p.q_1 + 45.0, 10000);
        const Spectrum s = sweep_field(grid, {p.detuning_1, p.detuning_2}, p, quad);
        std::size_t imin = 0;
        for (std::size_t i = 1; i < s.rates.size(); ++i)
            if (s.rates[i] < s.rates[imin]) imin = i;
        const double step = grid[1] - grid[0];
        worst_steps = std::max(worst_steps,
                               std::abs(s.axis[imin] - fano_minimum_field(p, 1)) / step);
    }
    const double secs = sw.seconds();
    report(2, "single-resonance minimum", worst_steps <= 1.0 && secs < 30.0,
           fmt("worst offset %.2f grid steps", worst_steps), secs);
}

// 3. |S_decay|^2 <= 1 + 1e-9 over 1e4 random valid parameter points.
void criterion_3() {
    Stopwatch sw;
    std::mt19937_64 rng(31337);
    double worst = 0.0;
    for (int trial = 0; trial < 10000; ++trial) {
        ModelParams p = random_valid(rng);
        const double eps = std::uniform_real_distribution<double>(-50.0, 50.0)(rng);
        const double kT = p.constants.thermal_energy_mhz(p.temperature);
        const double e = std::uniform_real_distribution<double>(1e-6, 10.0 * kT)(rng);
        worst = std::max(worst, std::norm(s_decay(dressed_amplitudes(eps, e, p), p)));
    }
    const double secs = sw.seconds();
    report(3, "unitarity bound", worst <= 1.0 + 1e-9 && secs < 10.0,
           fmt("max |S|^2 = 1 %+.2e", worst - 1.0), secs);
}

// 4. Thermal average vs a 1e6-point Riemann sum, 20 sets, 1e-6 relative.
void criterion_4() {
    Stopwatch sw;
    std::mt19937_64 rng(424242);
    auto uni = [&](double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); };
    QuadratureConfig quad;
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        ModelParams p = random_valid(rng);
        p.gamma_sp_1 = std::max(p.gamma_sp_1, 5.0);
        p.gamma_sp_2 = std::max(p.gamma_sp_2, 5.0);
        const double b = p.b0 + uni(-10.0, 10.0);
        const double kT = p.constants.thermal_energy_mhz(p.temperature);
        const double e_c = closed_channel_energy(b, p);
        const long m = 1000000;
        const double hi = 30.0 * kT;
        const double h = hi / m;
        double acc = 0.0;
#pragma omp parallel for reduction(+ : acc) schedule(static)
        for (long i = 1; i < m; ++i) {
            const double e = h * i;
            const double eps = reduced_energy(e, e_c, 0.0, p.gamma_f);
            acc += std::exp(-e / kT) * std::norm(s_decay(dressed_amplitudes(eps, e, p), p));
        }
        const double s2_0 = std::norm(
            s_decay(dressed_amplitudes(reduced_energy(1e-12, e_c, 0.0, p.gamma_f), 1e-12, p), p));
        const double s2_h = std::norm(
            s_decay(dressed_amplitudes(reduced_energy(hi, e_c, 0.0, p.gamma_f), hi, p), p));
        const double riemann =
            p.constants.thermal_rate_prefactor(p.temperature) *
            (h * (acc + 0.5 * (s2_0 + std::exp(-30.0) * s2_h)));
        const double gl = thermal_average(b, p, quad) - p.k_bg;
        worst = std::max(worst, std::abs(gl - riemann) / riemann);
    }
    const double secs = sw.seconds();
    report(4, "quadrature oracle", worst < 1e-6 && secs < 60.0,
           fmt("worst relative gap %.2e", worst), secs);
}

// 5. Constant |S|^2: weighted integral equals k_B T/(h Q_T) |S|^2 to 1e-10.
void criterion_5() {
    Stopwatch sw;
    QuadratureConfig quad;
    ModelParams p = pa_level_params(0);
    double worst = 0.0;
    for (double t : {1.0, 3.5, 5.0}) {
        const double kT = p.constants.thermal_energy_mhz(t);
        for (double s2 : {1.0, 0.2, 1e-4}) {
            const double integral = boltzmann_weighted_integral([&](double) { return s2; }, kT, quad);
            const double lhs = p.constants.thermal_rate_prefactor(t) * integral;
            const double rhs = p.constants.constant_s2_rate(t) * s2;
            worst = std::max(worst, std::abs(lhs - rhs) / rhs);
        }
    }
    const double secs = sw.seconds();
    report(5, "constant-|S|^2 identity", worst < 1e-10, fmt("worst relative gap %.2e", worst),
           secs);
}

// 6. Two-peak structure for the v=10 J=0 set; less asymmetric main peak
//    for the third.
void criterion_6() {
    Stopwatch sw;
    QuadratureConfig quad;
    const ModelParams a = pa_level_params(0);
    const ModelParams f3 = pa_level_params(2);
    const Spectrum sa = sweep_field(grid_from_eps(a, -30.0, 60.0, 500),
                                    {a.detuning_1, a.detuning_2}, a, quad);
    const Spectrum s3 = sweep_field(grid_from_eps(f3, -30.0, 60.0, 500),
                                    {f3.detuning_1, f3.detuning_2}, f3, quad);
    const int max_a = count_maxima(sa.rates);
    const int min_a = count_interior_minima(sa.rates);
    const int max_3 = count_maxima(s3.rates);
    const int min_3 = count_interior_minima(s3.rates);
    const double imb_a = area_imbalance(sa, a, 10.0);
    const double imb_3 = area_imbalance(s3, f3, 10.0);
    const bool pass = max_a == 2 && min_a >= 1 && max_3 == 2 && min_3 >= 1 && imb_3 < imb_a;
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "maxima %d/%d minima %d/%d, imbalance %.3f > %.3f", max_a, max_3, min_a,
                  min_3, imb_a, imb_3);
    report(6, "two-peak structure", pass, buf, sw.seconds());
}

// 7. Shift-scan slope flips sign through the loss-minimum field and is
//    negative far above the resonance.
void criterion_7() {
    Stopwatch sw;
    const ModelParams p = pa_level_params(1);
    const double kT = p.constants.thermal_energy_mhz(p.temperature);
    std::vector<double> dgrid(241);
    for (int i = 0; i < 241; ++i) dgrid[i] = -40.0 + 80.0 * i / 240.0;
    const std::vector<double> intensities = {0.5, 1.0, 1.5, 2.0};
    const std::vector<double> eps_scan = {-8.0, -4.0, -2.0, -0.5, 0.5, 2.0, 4.0, 8.0};

    std::vector<double> slopes;
    bool scan_ok = true;
    std::string why;
    for (double eps : eps_scan) {
        const double b = p.b0 + (kT - 0.5 * eps * p.gamma_f) / p.dmu;
        try {
            slopes.push_back(shift_scan(p, intensities, b, dgrid).slope);
        } catch (const Error& e) {
            scan_ok = false;
            why = e.what();
            break;
        }
    }
    bool pass = scan_ok;
    double cross_lo = 0.0, cross_hi = 0.0;
    if (scan_ok) {
        bool has_pos = false, has_neg = false;
        int crossing = -1;
        for (std::size_t i = 0; i < slopes.size(); ++i) {
            if (slopes[i] > 0.0) has_pos = true;
            if (slopes[i] < 0.0) has_neg = true;
            if (i > 0 && slopes[i - 1] > 0.0 && slopes[i] < 0.0) crossing = static_cast<int>(i);
        }
        const bool far_negative = slopes.back() < 0.0;
        pass = has_pos && has_neg && far_negative && crossing > 0;
        if (crossing > 0) {
            cross_lo = eps_scan[crossing - 1];
            cross_hi = eps_scan[crossing];
            // the crossing must straddle the single-resonance minimum location
            pass = pass && (-p.q_1 >= cross_lo - 2.0) && (-p.q_1 <= cross_hi + 2.0);
        }
    }
    char buf[200];
    if (scan_ok)
        std::snprintf(buf, sizeof buf,
                      "slopes %+0.2f..%+0.2f MHz/(W/cm^2), sign change in eps [%g, %g]",
                      slopes.front(), slopes.back(), cross_lo, cross_hi);
    else
        std::snprintf(buf, sizeof buf, "scan failed: %s", why.c_str());
    report(7, "dispersive shift slope", pass, buf, sw.seconds());
}

// 8. Noiseless fit round trip, 50/50 cases to 1e-4 relative.
void criterion_8() {
    Stopwatch sw;
    std::mt19937_64 rng(99123);
    auto uni = [&](double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); };
    QuadratureConfig quad;
    quad.node_count = 24;
    const std::vector<std::vector<std::string>> free_sets = {
        {"q_1", "gamma_1"},          {"q_1", "detuning_1"}, {"gamma_1", "detuning_1"},
        {"q_1", "gamma_1", "k_bg"},  {"gamma_1", "k_bg"},
    };
    int recovered = 0;
    double worst = 0.0;
    const int total = 50;
    for (int trial = 0; trial < total; ++trial) {
        const ModelParams truth = pa_level_params(trial % 3);
        const auto& free = free_sets[trial % free_sets.size()];
        std::vector<double> grid(80);
        for (int i = 0; i < 80; ++i) grid[i] = truth.b0 - 16.0 + 31.0 * i / 79.0;
        const Spectrum data = sweep_field(grid, {truth.detuning_1, truth.detuning_2}, truth, quad);
        ModelParams start = truth;
        for (const auto& name : free) {
            const double v = get_param(truth, name);
            const double sign = uni(0.0, 1.0) < 0.5 ? -1.0 : 1.0;
            set_param(start, name, v == 0.0 ? sign * 0.2 : v * (1.0 + sign * 0.2));
        }
        try {
            const FitResult fit = fit_model(data, start, free, {}, quad);
            double err = 0.0;
            for (std::size_t j = 0; j < free.size(); ++j) {
                const double t = get_param(truth, free[j]);
                err = std::max(err, std::abs(fit.values[j] - t) / std::max(std::abs(t), 1e-12));
            }
            worst = std::max(worst, err);
            if (err < 1e-4) ++recovered;
        } catch (const Error&) {
        }
    }
    const double secs = sw.seconds();
    report(8, "fit round trip", recovered == total && secs < 300.0,
           fmt("recovered %.0f/50, worst %.1e", static_cast<double>(recovered), worst), secs);
}

// 9. Decay round trip to 1e-10; RK4 vs closed form to 1e-8.
void criterion_9() {
    Stopwatch sw;
    std::mt19937_64 rng(606060);
    auto uni = [&](double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); };
    double worst_rt = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        const double n0 = std::pow(10.0, uni(10.0, 13.0));
        const double k = std::pow(10.0, uni(-13.0, -10.0));
        std::vector<double> times(25);
        const double t_max = uni(1.0, 4.0) / (k * n0);
        for (int i = 0; i < 25; ++i) times[static_cast<std::size_t>(i)] = t_max * i / 24.0;
        const RateEstimate est = extract_k(integrate_decay(n0, k, times));
        worst_rt = std::max(worst_rt, std::abs(est.k_av - k) / k);
    }
    double worst_rk4 = 0.0;
    {
        // deep decay K n0 t_max = 100, 25 log-spaced samples x 40 substeps
        // = 10^3 integrator steps
        const double n0 = 3e11, k = 1e-11;
        const double t_max = 100.0 / (k * n0);
        std::vector<double> times = {0.0};
        for (int i = 1; i <= 25; ++i)
            times.push_back(t_max * (std::pow(100.0, i / 25.0) - 1.0) / 99.0);
        const DecayTrace exact = integrate_decay(n0, k, times);
        const DecayTrace rk4 = integrate_decay_rk4(n0, [&](double) { return k; }, times, 40);
        for (std::size_t i = 0; i < times.size(); ++i)
            worst_rk4 = std::max(worst_rk4, std::abs(rk4.densities[i] - exact.densities[i]) /
                                                exact.densities[i]);
    }
    const double secs = sw.seconds();
    report(9, "decay round trip", worst_rt < 1e-10 && worst_rk4 < 1e-8,
           fmt("extract %.1e, RK4 gap %.1e", worst_rt, worst_rk4), secs);
}

// 10. Amplitudes vs a direct 2x2 solve at 100 random points to 1e-12.
void criterion_10() {
    Stopwatch sw;
    std::mt19937_64 rng(271828);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        ModelParams p = random_valid(rng);
        p.gamma_1 = std::max(p.gamma_1, 1e-3);
        p.gamma_2 = std::max(p.gamma_2, 1e-3);
        const double eps = std::uniform_real_distribution<double>(-50.0, 50.0)(rng);
        const double e = std::uniform_real_distribution<double>(1e-4, 0.5)(rng);
        const auto amps = dressed_amplitudes(eps, e, p);
        const Complex det = amps.xi_1 * amps.xi_2 - amps.q_12 * amps.q_21;
        const Complex a1 = (amps.r_1 * amps.xi_2 + amps.q_12 * amps.r_2) / det;
        const Complex a2 = (amps.r_2 * amps.xi_1 + amps.q_21 * amps.r_1) / det;
        worst = std::max(worst, std::abs(a1 - amps.a_1) / (std::abs(a1) + 1e-300));
        worst = std::max(worst, std::abs(a2 - amps.a_2) / (std::abs(a2) + 1e-300));
    }
    report(10, "linear-solve oracle", worst < 1e-12, fmt("worst relative gap %.2e", worst),
           sw.seconds());
}

} // namespace

int main() {
    Stopwatch total;
    std::printf("acceptance suite: coupled dual-resonance loss model\n");
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    criterion_10();
    std::printf("%d/10 criteria passed (%.1f s total)\n", 10 - g_failures, total.seconds());
    return g_failures;
}
