#pragma once

#include <functional>
#include <vector>

namespace fanopa {

struct LeastSquaresOptions {
    int max_iterations = 200;
    double lambda0 = 1e-3;       // initial damping
    double lambda_shrink = 0.3;
    double lambda_grow = 10.0;
    double fd_rel_step = 1e-6;   // central-difference Jacobian step, relative
    double ftol = 1e-14;         // relative residual-norm decrease
    double xtol = 1e-12;         // scaled step size
};

struct LeastSquaresResult {
    std::vector<double> params;
    std::vector<double> sigma;            // standard errors from the curvature
    double residual_norm = 0.0;           // ||r||_2 at the solution
    int iterations = 0;                   // accepted steps
    bool converged = false;
    std::vector<double> residual_history; // ||r||_2 after each accepted step
};

// Damped least squares (Levenberg-Marquardt) on r(x), with box bounds
// enforced by projecting trial points, central-difference Jacobian and
// per-parameter scales for the differencing and step-size tests. The
// residual norm never increases across accepted steps. Throws
// DegenerateJacobian when a column of the Jacobian is numerically zero.
LeastSquaresResult levenberg_marquardt(
    const std::function<std::vector<double>(const std::vector<double>&)>& residuals,
    std::vector<double> initial,
    const std::vector<double>& lower,
    const std::vector<double>& upper,
    const std::vector<double>& scales,
    const LeastSquaresOptions& opts = {});

// Ordinary least squares y ~ intercept + slope * x; returns slope, intercept
// and the standard error of the slope.
struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_sigma = 0.0;
    double residual_norm = 0.0;
};
LinearFit linear_regression(const std::vector<double>& x, const std::vector<double>& y);

} // namespace fanopa
