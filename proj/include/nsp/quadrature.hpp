#pragma once

#include <functional>

#include "nsp/errors.hpp"

namespace nsp {

struct QuadratureResult {
    double value = 0.0;
    double abs_error = 0.0;
    int evaluations = 0;
};

// Adaptive Gauss-Kronrod (7,15) bisection on [a,b]. Panels are refined until
// the Kronrod error estimate meets rel_tol (against the running integral) or
// abs_tol; exceeding max_panels raises DivergentIntegralError.
QuadratureResult integrate_gk(const std::function<double(double)>& f, double a, double b,
                              double rel_tol = 1e-10, double abs_tol = 0.0,
                              int max_panels = 20000);

}  // namespace nsp
