#include "biasreg/quadrature.hpp"

#include <cmath>
#include <queue>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "biasreg/errors.hpp"

namespace biasreg {

namespace {

constexpr int kMaxSubintervals = 4000;

struct Panel {
    double a, b, value, error;
    bool operator<(const Panel& o) const { return error < o.error; }
};

// 15-point Kronrod estimate with the embedded 7-point Gauss rule for the error.
Panel kronrod_panel(const ScalarFn& f, double a, double b) {
    using kronrod = boost::math::quadrature::gauss_kronrod<double, 15>;
    using gauss = boost::math::quadrature::gauss<double, 7>;
    static const auto& kx = kronrod::abscissa();
    static const auto& kw = kronrod::weights();
    static const auto& gw = gauss::weights();

    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    const double f0 = f(mid);
    double k = f0 * kw[0];
    // Kronrod nodes alternate: odd indices are the Gauss nodes (0 is shared).
    double g = f0 * gw[0];
    for (std::size_t i = 1; i < kx.size(); ++i) {
        const double dx = half * kx[i];
        const double pair = f(mid - dx) + f(mid + dx);
        k += kw[i] * pair;
        if (i % 2 == 0) g += gw[i / 2] * pair;
    }
    return {a, b, k * half, std::abs((k - g) * half)};
}

}  // namespace

double integrate_adaptive(const ScalarFn& f, double a, double b, double abs_tol) {
    if (a == b) return 0.0;
    std::priority_queue<Panel> panels;
    Panel first = kronrod_panel(f, a, b);
    double value = first.value, error = first.error;
    panels.push(first);
    int count = 1;
    while (error > abs_tol && count < kMaxSubintervals) {
        const Panel worst = panels.top();
        panels.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        const Panel left = kronrod_panel(f, worst.a, mid);
        const Panel right = kronrod_panel(f, mid, worst.b);
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        panels.push(left);
        panels.push(right);
        ++count;
        if (count % 64 == 0) {
            // Re-sum to shed accumulated rounding in the running totals.
            auto copy = panels;
            value = error = 0.0;
            while (!copy.empty()) {
                value += copy.top().value;
                error += copy.top().error;
                copy.pop();
            }
        }
    }
    if (!std::isfinite(value) || !(error <= abs_tol))
        throw QuadratureFailure("Gauss-Kronrod error estimate " + std::to_string(error) +
                                " exceeds tolerance " + std::to_string(abs_tol));
    return value;
}

double integrate_endpoint_singular(const std::function<double(double, double)>& f, double a,
                                   double b, double rel_tol) {
    if (a == b) return 0.0;
    thread_local boost::math::quadrature::tanh_sinh<double> integrator(15);
    double error = 0.0;
    double l1 = 0.0;
    double value = 0.0;
    try {
        value = integrator.integrate(f, a, b, rel_tol * 1e-2, &error, &l1);
    } catch (const std::exception& e) {
        throw QuadratureFailure(std::string("tanh-sinh: ") + e.what());
    }
    if (!std::isfinite(value) || !(error <= rel_tol * std::max(l1, 1e-300)))
        throw QuadratureFailure("tanh-sinh error estimate " + std::to_string(error) +
                                " exceeds relative tolerance " + std::to_string(rel_tol));
    return value;
}

}  // namespace biasreg
