#include "biasreg/appell.hpp"

#include <cmath>

#include "biasreg/errors.hpp"
#include "biasreg/quadrature.hpp"

namespace biasreg {

double appell_f1(const AppellF1Args& args) {
    const auto& [a, b, bp, c, x, y] = args;
    if (!(a > 0.0) || !(c - a > 0.0))
        throw DomainError("Euler integral for F1 needs a > 0 and c - a > 0");
    if ((x > 1.0 && b != 0.0) || (y > 1.0 && bp != 0.0))
        throw DomainError("F1 integrand has a pole on (0, 1)");
    if (x == 0.0 && y == 0.0) return 1.0;

    const double log_norm = std::lgamma(c) - std::lgamma(a) - std::lgamma(c - a);
    auto integrand = [&](double u, double uc) {
        // 1 - u evaluated from the complement near the right endpoint.
        const double one_minus_u = u > 0.5 ? uc : 1.0 - u;
        double v = std::pow(u, a - 1.0) * std::pow(one_minus_u, c - a - 1.0);
        if (b != 0.0) v *= std::pow(one_minus_u + u * (1.0 - x), -b);
        if (bp != 0.0) v *= std::pow(one_minus_u + u * (1.0 - y), -bp);
        return v;
    };
    return std::exp(log_norm) * integrate_endpoint_singular(integrand, 0.0, 1.0, 1e-12);
}

}  // namespace biasreg
