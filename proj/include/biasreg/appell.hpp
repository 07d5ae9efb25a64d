#pragma once

namespace biasreg {

/// Parameters of the Appell function F1(a; b, b'; c; x, y).
struct AppellF1Args {
    double a = 1.0;
    double b = 0.0;
    double b_prime = 0.0;
    double c = 2.0;
    double x = 0.0;
    double y = 0.0;
};

/// F1 through its Euler integral
///
///   Gamma(c) / (Gamma(a) Gamma(c - a)) *
///     int_0^1 u^(a-1) (1-u)^(c-a-1) (1-ux)^(-b) (1-uy)^(-b') du,
///
/// which agrees with the double hypergeometric series on |x|, |y| < 1 and
/// continues it analytically to x, y < 1 (in particular to large negative
/// arguments). Requires a > 0 and c - a > 0; throws DomainError when either
/// (1 - ux) or (1 - uy) vanishes inside (0, 1) with a nonzero exponent.
double appell_f1(const AppellF1Args& args);

}  // namespace biasreg
