#include "fanopa/model_core.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fanopa/errors.hpp"
#include "fanopa/quadrature.hpp"

namespace fanopa {

namespace {

// Pole guard for the coupled denominators, MHz.
constexpr double kDenominatorFloor = 1e-12;

void require_finite(const Complex& z, const char* what) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
        throw SingularDenominator(std::string(what) + " evaluated to a non-finite value");
}

} // namespace

double closed_channel_energy(double b_field, const ModelParams& p) {
    return p.dmu * (b_field - p.b0);
}

double reduced_energy(double collision_e, double e_c, double e_c_shift, double gamma_f) {
    if (!(gamma_f > 0.0))
        throw DomainError("reduced_energy requires gamma_f > 0");
    return (collision_e - e_c - e_c_shift) / (0.5 * gamma_f);
}

SWaveCouplings s_wave_couplings(const ModelParams& p) {
    const double two_pi = 2.0 * M_PI;
    return SWaveCouplings{
        std::sqrt(p.gamma_f / two_pi),
        std::sqrt(p.gamma_1 / two_pi),
        std::sqrt(p.gamma_2 / two_pi),
        std::sqrt(p.gamma_sp_1 / two_pi),
        std::sqrt(p.gamma_sp_2 / two_pi),
    };
}

Complex fano_profile_r(double eps, double q_n, const ModelParams& p, int n) {
    const double lambda = (n == 1) ? std::sqrt(p.gamma_1 / (2.0 * M_PI))
                                   : std::sqrt(p.gamma_2 / (2.0 * M_PI));
    return lambda * (eps + q_n) / Complex(eps, 1.0);
}

Complex e_q_complex(double eps, int n, const ModelParams& p) {
    const double gamma_n = (n == 1) ? p.gamma_1 : p.gamma_2;
    const double q_n = (n == 1) ? p.q_1 : p.q_2;
    const Complex qi(q_n, -1.0);
    return qi * qi * gamma_n / (2.0 * Complex(eps, 1.0));
}

std::pair<Complex, Complex> cross_coupling(double eps, const ModelParams& p) {
    // Off-diagonal continuum-mediated term plus the shared-decay-channel
    // (vacuum-induced) term; the real principal-value part is zero in the
    // flat-coupling engine.
    const Complex k_12(0.0, -0.5 * (std::sqrt(p.gamma_1 * p.gamma_2) +
                                    std::sqrt(p.gamma_sp_1 * p.gamma_sp_2)));
    const Complex resonant = Complex(p.q_1, -1.0) * Complex(p.q_2, -1.0) *
                             std::sqrt(p.gamma_1 * p.gamma_2) / (2.0 * Complex(eps, 1.0));
    const Complex q = k_12 + resonant;
    return {q, q};
}

DressedAmplitudes dressed_amplitudes(double eps, double collision_e, const ModelParams& p) {
    return detail::dressed_amplitudes_signed(eps, collision_e, p, 1.0);
}

namespace detail {

DressedAmplitudes dressed_amplitudes_signed(double eps, double collision_e,
                                            const ModelParams& p, double im_sign) {
    const Complex iu(0.0, im_sign);
    const Complex eps_i = eps + iu;
    const SWaveCouplings c = s_wave_couplings(p);

    DressedAmplitudes out{};
    out.r_1 = c.lambda_1 * (eps + p.q_1) / eps_i;
    out.r_2 = c.lambda_2 * (eps + p.q_2) / eps_i;

    // Self-energies; xi_n = E + delta_n + i(gamma_sp_n + gamma_n)/2 - selfE_n
    // packs the interference shift and width correction in one subtraction.
    const Complex self_1 = (p.q_1 - iu) * (p.q_1 - iu) * p.gamma_1 / (2.0 * eps_i);
    const Complex self_2 = (p.q_2 - iu) * (p.q_2 - iu) * p.gamma_2 / (2.0 * eps_i);
    out.xi_1 = collision_e + p.detuning_1 + iu * (0.5 * (p.gamma_sp_1 + p.gamma_1)) - self_1;
    out.xi_2 = collision_e + p.detuning_2 + iu * (0.5 * (p.gamma_sp_2 + p.gamma_2)) - self_2;

    const Complex k_12 = -iu * 0.5 * (std::sqrt(p.gamma_1 * p.gamma_2) +
                                      std::sqrt(p.gamma_sp_1 * p.gamma_sp_2));
    const Complex resonant = (p.q_1 - iu) * (p.q_2 - iu) *
                             std::sqrt(p.gamma_1 * p.gamma_2) / (2.0 * eps_i);
    out.q_12 = k_12 + resonant;
    out.q_21 = out.q_12;

    // a_n = [r_n + q_nn'/xi_n' * r_n'] / (xi_n - q_nn' q_n'n / xi_n'),
    // with exact-zero couplings short-circuited so that a fully dark partner
    // state never touches the other denominator.
    const Complex zero(0.0, 0.0);
    const Complex qq = out.q_12 * out.q_21;

    auto solve_one = [&](const Complex& r_n, const Complex& xi_n, const Complex& q_cross,
                         const Complex& r_other, const Complex& xi_other,
                         Complex& d_n, int n) -> Complex {
        const Complex cross_num = q_cross * r_other;
        Complex numer = r_n;
        d_n = xi_n;
        if (cross_num != zero || qq != zero) {
            if (std::abs(xi_other) < kDenominatorFloor)
                throw SingularDenominator("xi_" + std::to_string(3 - n) +
                                          " vanishes at the evaluated point");
            numer += cross_num / xi_other;
            d_n -= qq / xi_other;
        }
        if (numer == zero) return zero;
        if (std::abs(d_n) < kDenominatorFloor)
            throw SingularDenominator("coupled denominator for bound state " +
                                      std::to_string(n) + " vanishes at the evaluated point");
        return numer / d_n;
    };

    out.a_1 = solve_one(out.r_1, out.xi_1, out.q_12, out.r_2, out.xi_2, out.d_1, 1);
    out.a_2 = solve_one(out.r_2, out.xi_2, out.q_21, out.r_1, out.xi_1, out.d_2, 2);

    // Closed-channel amplitude.
    Complex b_num = c.v00;
    b_num += (p.q_1 - iu) * (0.5 * std::sqrt(p.gamma_1 * p.gamma_f)) * out.a_1;
    b_num += (p.q_2 - iu) * (0.5 * std::sqrt(p.gamma_2 * p.gamma_f)) * out.a_2;
    out.b_e = b_num / (0.5 * p.gamma_f * eps_i);

    require_finite(out.a_1, "a_1");
    require_finite(out.a_2, "a_2");
    require_finite(out.b_e, "b_e");
    return out;
}

} // namespace detail

CouplingProfile sampled_profile(std::vector<double> energies, std::vector<double> values) {
    if (energies.size() < 2 || energies.size() != values.size())
        throw ValidationError("sampled_profile needs >= 2 matching samples");
    for (std::size_t i = 1; i < energies.size(); ++i)
        if (!(energies[i] > energies[i - 1]))
            throw ValidationError("sampled_profile energies must be strictly increasing");
    CouplingProfile prof;
    prof.e_min = energies.front();
    prof.e_max = energies.back();
    prof.value = [e = std::move(energies), v = std::move(values)](double x) {
        auto it = std::upper_bound(e.begin(), e.end(), x);
        if (it == e.begin()) return v.front();
        if (it == e.end()) return v.back();
        const std::size_t hi = static_cast<std::size_t>(it - e.begin());
        const std::size_t lo = hi - 1;
        const double t = (x - e[lo]) / (e[hi] - e[lo]);
        return v[lo] + t * (v[hi] - v[lo]);
    };
    return prof;
}

double principal_value_coupling(const CouplingProfile& v_profile,
                                const CouplingProfile& lambda_profile,
                                double e,
                                double rel_tol) {
    const double lo = std::max(v_profile.e_min, lambda_profile.e_min);
    const double hi = std::min(v_profile.e_max, lambda_profile.e_max);
    if (!(lo < hi) || !(e > lo) || !(e < hi))
        throw DomainError("principal value energy must lie strictly inside the common profile domain");

    auto g = [&](double ep) { return v_profile.value(ep) * lambda_profile.value(ep); };

    // Symmetric window [e-a, e+a]: the 1/(e-E') singularity cancels pairwise,
    //   int_d^a (g(e-u) - g(e+u)) / u du,
    // and the remainder of the domain is a regular integral.
    const double a = std::min(e - lo, hi - e);
    auto paired = [&](double u) { return (g(e - u) - g(e + u)) / u; };

    // Fixed composite Simpson per shell; the excision-halving loop below is
    // the convergence control, and for small u the paired difference sits on
    // the cancellation noise floor where adaptive refinement cannot help.
    auto shell = [&](double u0, double u1) {
        const int panels = 64;
        const double h = (u1 - u0) / (2 * panels);
        double sum = paired(u0) + paired(u1);
        for (int k = 1; k < 2 * panels; ++k)
            sum += paired(u0 + k * h) * (k % 2 ? 4.0 : 2.0);
        return sum * h / 3.0;
    };

    double outer = 0.0;
    const double quad_tol = std::max(rel_tol * 1e-2, 1e-12);
    if (lo < e - a)
        outer += adaptive_simpson([&](double ep) { return g(ep) / (e - ep); }, lo, e - a, quad_tol);
    if (e + a < hi)
        outer += adaptive_simpson([&](double ep) { return g(ep) / (e - ep); }, e + a, hi, quad_tol);

    // Shrink the excision half-width until the symmetric part settles.
    double excision = 0.5 * a;
    double inner = shell(excision, a);
    const double scale = std::abs(outer) + std::abs(inner) + 1e-300;
    for (int iter = 0; iter < 64; ++iter) {
        const double half = 0.5 * excision;
        const double refined = inner + shell(half, excision);
        const double change = std::abs(refined - inner);
        inner = refined;
        excision = half;
        if (change <= rel_tol * (std::abs(refined) + scale))
            return outer + inner;
    }
    throw QuadratureNonConvergence("principal value integral did not converge as the excision half-width shrank");
}

double forward_q(double omega_n, double v_eff, double gamma_n, double gamma_f) {
    if (!(gamma_n > 0.0) || !(gamma_f > 0.0))
        throw DomainError("forward_q requires gamma_n > 0 and gamma_f > 0");
    return (omega_n + v_eff) / (0.5 * std::sqrt(gamma_n * gamma_f));
}

} // namespace fanopa
