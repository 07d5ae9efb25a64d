#pragma once

#include <functional>

namespace biasreg {

using ScalarFn = std::function<double(double)>;

/// Globally adaptive Gauss-Kronrod (7/15) on [a, b]. Throws QuadratureFailure when the
/// error estimate is above `abs_tol` or the result is not finite.
double integrate_adaptive(const ScalarFn& f, double a, double b, double abs_tol);

/// Tanh-sinh on [a, b] for integrands with endpoint singularities. The
/// integrand receives (x, xc) where xc is the signed distance to the nearest
/// endpoint (a - x on the left half, b - x on the right half).
double integrate_endpoint_singular(const std::function<double(double, double)>& f, double a,
                                   double b, double rel_tol);

}  // namespace biasreg
