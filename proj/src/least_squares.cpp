#include "fanopa/least_squares.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "fanopa/errors.hpp"

namespace fanopa {

namespace {

double norm2(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

// Solves (A + lambda diag(A)) x = b for symmetric positive semidefinite A by
// Cholesky with a growing ridge; n is tiny here (<= 9).
bool solve_damped(std::vector<double> a, std::vector<double> b, double lambda,
                  int n, std::vector<double>& x) {
    for (int i = 0; i < n; ++i)
        a[i * n + i] *= (1.0 + lambda);
    // Cholesky in place.
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j <= i; ++j) {
            double s = a[i * n + j];
            for (int k = 0; k < j; ++k) s -= a[i * n + k] * a[j * n + k];
            if (i == j) {
                if (!(s > 0.0)) return false;
                a[i * n + i] = std::sqrt(s);
            } else {
                a[i * n + j] = s / a[j * n + j];
            }
        }
    }
    // Forward/back substitution.
    for (int i = 0; i < n; ++i) {
        double s = b[i];
        for (int k = 0; k < i; ++k) s -= a[i * n + k] * b[k];
        b[i] = s / a[i * n + i];
    }
    x.assign(n, 0.0);
    for (int i = n - 1; i >= 0; --i) {
        double s = b[i];
        for (int k = i + 1; k < n; ++k) s -= a[k * n + i] * x[k];
        x[i] = s / a[i * n + i];
    }
    return true;
}

} // namespace

LeastSquaresResult levenberg_marquardt(
    const std::function<std::vector<double>(const std::vector<double>&)>& residuals,
    std::vector<double> initial,
    const std::vector<double>& lower,
    const std::vector<double>& upper,
    const std::vector<double>& scales,
    const LeastSquaresOptions& opts) {
    const int n = static_cast<int>(initial.size());
    if (static_cast<int>(lower.size()) != n || static_cast<int>(upper.size()) != n ||
        static_cast<int>(scales.size()) != n)
        throw ValidationError("levenberg_marquardt: bounds/scales size mismatch");

    auto project = [&](std::vector<double>& x) {
        for (int j = 0; j < n; ++j) x[j] = std::clamp(x[j], lower[j], upper[j]);
    };
    project(initial);

    LeastSquaresResult res;
    res.params = initial;
    std::vector<double> r = residuals(initial);
    const int m = static_cast<int>(r.size());
    res.residual_norm = norm2(r);
    res.residual_history.push_back(res.residual_norm);

    if (n == 0) {
        res.converged = true;
        return res;
    }

    // Central differences with bound-clamped evaluation points.
    std::vector<double> jac(static_cast<std::size_t>(m) * n);
    auto fill_jacobian = [&](const std::vector<double>& x) {
        for (int j = 0; j < n; ++j) {
            const double step = opts.fd_rel_step * std::max(std::abs(x[j]), scales[j]);
            std::vector<double> xp = x, xm = x;
            xp[j] = std::clamp(x[j] + step, lower[j], upper[j]);
            xm[j] = std::clamp(x[j] - step, lower[j], upper[j]);
            const double h = xp[j] - xm[j];
            if (h == 0.0)
                throw DegenerateJacobian("parameter " + std::to_string(j) +
                                         " is pinned by its bounds");
            const std::vector<double> rp = residuals(xp);
            const std::vector<double> rm = residuals(xm);
            double col_norm = 0.0;
            for (int i = 0; i < m; ++i) {
                const double d = (rp[i] - rm[i]) / h;
                jac[static_cast<std::size_t>(i) * n + j] = d;
                col_norm += d * d;
            }
            const double ref = res.residual_norm / scales[j] + 1.0;
            if (!(std::sqrt(col_norm) > 1e-14 * ref))
                throw DegenerateJacobian("free parameter " + std::to_string(j) +
                                         " has no effect on the residuals");
        }
    };

    double lambda = opts.lambda0;
    bool converged = false;
    int accepted = 0;
    int small_drops = 0;

    for (int iter = 0; iter < opts.max_iterations && !converged; ++iter) {
        fill_jacobian(res.params);

        // Normal equations, scaled: A = J^T J, g = J^T r.
        std::vector<double> a(static_cast<std::size_t>(n) * n, 0.0), g(n, 0.0);
        for (int i = 0; i < m; ++i) {
            for (int j = 0; j < n; ++j) {
                const double jij = jac[static_cast<std::size_t>(i) * n + j];
                g[j] += jij * r[i];
                for (int k = 0; k <= j; ++k)
                    a[static_cast<std::size_t>(j) * n + k] += jij * jac[static_cast<std::size_t>(i) * n + k];
            }
        }
        for (int j = 0; j < n; ++j)
            for (int k = j + 1; k < n; ++k)
                a[static_cast<std::size_t>(j) * n + k] = a[static_cast<std::size_t>(k) * n + j];

        bool stepped = false;
        for (int attempt = 0; attempt < 32; ++attempt) {
            std::vector<double> step;
            if (!solve_damped(a, g, lambda, n, step)) {
                lambda *= opts.lambda_grow;
                continue;
            }
            std::vector<double> trial = res.params;
            for (int j = 0; j < n; ++j) trial[j] -= step[j];
            project(trial);

            const std::vector<double> rt = residuals(trial);
            const double nt = norm2(rt);
            if (nt <= res.residual_norm) {
                double scaled_step = 0.0;
                for (int j = 0; j < n; ++j)
                    scaled_step = std::max(scaled_step,
                                           std::abs(trial[j] - res.params[j]) /
                                               std::max(std::abs(res.params[j]), scales[j]));
                const double drop = res.residual_norm - nt;
                res.params = trial;
                r = rt;
                res.residual_norm = nt;
                res.residual_history.push_back(nt);
                ++accepted;
                lambda = std::max(lambda * opts.lambda_shrink, 1e-14);
                stepped = true;
                // Small single drops can just mean a slow valley; require the
                // progress to stay negligible over a few accepted steps.
                if (drop <= opts.ftol * (nt + 1e-300))
                    ++small_drops;
                else
                    small_drops = 0;
                if (scaled_step < opts.xtol || small_drops >= 3)
                    converged = true;
                break;
            }
            lambda *= opts.lambda_grow;
        }
        if (!stepped) {
            // The full damping ladder found no downhill direction: stationary.
            converged = true;
        }
    }

    res.iterations = accepted;
    res.converged = converged;

    // Standard errors from the undamped curvature at the solution; left at
    // zero when the curvature is unusable there (singular or bound-pinned).
    res.sigma.assign(n, 0.0);
    if (m > n) try {
        fill_jacobian(res.params);
        std::vector<double> a(static_cast<std::size_t>(n) * n, 0.0);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k <= j; ++k)
                    a[static_cast<std::size_t>(j) * n + k] +=
                        jac[static_cast<std::size_t>(i) * n + j] * jac[static_cast<std::size_t>(i) * n + k];
        for (int j = 0; j < n; ++j)
            for (int k = j + 1; k < n; ++k)
                a[static_cast<std::size_t>(j) * n + k] = a[static_cast<std::size_t>(k) * n + j];
        const double s2 = res.residual_norm * res.residual_norm / (m - n);
        // Invert via Cholesky solves against unit vectors.
        for (int j = 0; j < n; ++j) {
            std::vector<double> e(n, 0.0), col;
            e[j] = 1.0;
            if (solve_damped(a, e, 0.0, n, col) && col[j] > 0.0)
                res.sigma[j] = std::sqrt(s2 * col[j]);
        }
    } catch (const DegenerateJacobian&) {
    }
    return res;
}

LinearFit linear_regression(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw ValidationError("linear_regression needs >= 2 matching points");
    const int m = static_cast<int>(x.size());
    double mx = 0.0, my = 0.0;
    for (int i = 0; i < m; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= m;
    my /= m;
    double sxx = 0.0, sxy = 0.0;
    for (int i = 0; i < m; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (!(sxx > 0.0))
        throw ValidationError("linear_regression: x values are all equal");
    LinearFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double ss = 0.0;
    for (int i = 0; i < m; ++i) {
        const double ri = y[i] - (fit.intercept + fit.slope * x[i]);
        ss += ri * ri;
    }
    fit.residual_norm = std::sqrt(ss);
    fit.slope_sigma = (m > 2) ? std::sqrt(ss / (m - 2) / sxx) : 0.0;
    return fit;
}

} // namespace fanopa
