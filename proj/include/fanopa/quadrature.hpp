#pragma once

#include <functional>
#include <vector>

namespace fanopa {

// Nodes and weights for integral_0^inf exp(-x) f(x) dx ~ sum w_i f(x_i).
struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

// Cached Gauss-Laguerre rule; n in [2, 180] (larger orders overflow the
// unscaled Laguerre recurrence in double precision).
const QuadratureRule& gauss_laguerre(int n);

// Recursive adaptive Simpson on [a, b]; rel_tol is relative to the running
// estimate with a small absolute floor. Throws QuadratureNonConvergence once
// max_depth subdivisions fail to reach the tolerance.
double adaptive_simpson(const std::function<double(double)>& f,
                        double a, double b, double rel_tol, int max_depth = 48);

} // namespace fanopa
