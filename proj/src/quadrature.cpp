#include "fanopa/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <string>

#include "fanopa/errors.hpp"

namespace fanopa {

namespace {

// Newton iteration on the Laguerre recurrence, standard initial guesses.
QuadratureRule build_gauss_laguerre(int n) {
    QuadratureRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const double eps = 1e-14;
    const int max_newton = 64;

    double z = 0.0;
    for (int i = 0; i < n; ++i) {
        if (i == 0) {
            z = 3.0 / (1.0 + 2.4 * n);
        } else if (i == 1) {
            z += 15.0 / (1.0 + 2.5 * n);
        } else {
            const double ai = i - 1;
            z += (1.0 + 2.55 * ai) / (1.9 * ai) * (z - rule.nodes[i - 2]);
        }
        double pp = 0.0, p2 = 0.0;
        bool settled = false;
        for (int it = 0; it < max_newton; ++it) {
            double p1 = 1.0;
            p2 = 0.0;
            for (int j = 1; j <= n; ++j) {
                const double p3 = p2;
                p2 = p1;
                p1 = ((2.0 * j - 1.0 - z) * p2 - (j - 1.0) * p3) / j;
            }
            pp = n * (p1 - p2) / z;
            const double z1 = z;
            z = z1 - p1 / pp;
            if (std::abs(z - z1) <= eps * std::max(1.0, std::abs(z))) {
                settled = true;
                break;
            }
        }
        if (!settled)
            throw QuadratureNonConvergence("Gauss-Laguerre node " + std::to_string(i) +
                                           " of " + std::to_string(n) + " did not settle");
        rule.nodes[i] = z;
        rule.weights[i] = -1.0 / (pp * n * p2);
    }
    return rule;
}

} // namespace

const QuadratureRule& gauss_laguerre(int n) {
    if (n < 2 || n > 180)
        throw ValidationError("gauss_laguerre order must be in [2, 180], got " + std::to_string(n));
    static std::map<int, QuadratureRule> cache;
    static std::mutex mutex;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(n);
    if (it == cache.end())
        it = cache.emplace(n, build_gauss_laguerre(n)).first;
    return it->second;
}

namespace {

double simpson_segment(double fa, double fm, double fb, double h) {
    return h / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_simpson_rec(const std::function<double(double)>& f,
                            double a, double b, double fa, double fm, double fb,
                            double whole, double abs_tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = simpson_segment(fa, flm, fm, m - a);
    const double right = simpson_segment(fm, frm, fb, b - m);
    const double delta = left + right - whole;
    if (std::abs(delta) <= 15.0 * abs_tol)
        return left + right + delta / 15.0;
    if (depth <= 0)
        throw QuadratureNonConvergence("adaptive Simpson failed to reach tolerance on [" +
                                       std::to_string(a) + ", " + std::to_string(b) + "]");
    return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * abs_tol, depth - 1) +
           adaptive_simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * abs_tol, depth - 1);
}

} // namespace

double adaptive_simpson(const std::function<double(double)>& f,
                        double a, double b, double rel_tol, int max_depth) {
    if (!(b > a))
        throw DomainError("adaptive_simpson requires b > a");
    const double fa = f(a);
    const double fb = f(b);
    const double fm = f(0.5 * (a + b));
    const double whole = simpson_segment(fa, fm, fb, b - a);
    const double abs_tol = rel_tol * (std::abs(whole) + 1e-300) + 1e-300;
    return adaptive_simpson_rec(f, a, b, fa, fm, fb, whole, abs_tol, max_depth);
}

} // namespace fanopa
