#include "biasreg/basin.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "biasreg/errors.hpp"
#include "biasreg/random.hpp"

namespace biasreg {

namespace {

constexpr int kHalfWindow = 5;

}  // namespace

BasinGeometry locate_min_and_curvature(const std::vector<double>& alphas,
                                       const std::vector<double>& errors) {
    if (alphas.size() != errors.size() || alphas.empty())
        throw DimensionMismatch("alpha and error vectors must be non-empty and equal length");
    for (double e : errors)
        if (!std::isfinite(e)) throw NonFinite("error curve is not finite on the grid");

    const auto n = static_cast<int>(alphas.size());
    const int i0 = static_cast<int>(std::min_element(errors.begin(), errors.end()) - errors.begin());
    const int lo = std::max(0, i0 - kHalfWindow);
    const int hi = std::min(n - 1, i0 + kHalfWindow);

    std::set<double> distinct(alphas.begin() + lo, alphas.begin() + hi + 1);
    if (distinct.size() < 3) throw DegenerateFit("fewer than 3 distinct points around the minimum");

    // Normal equations for the two-parameter model without intercept.
    double s11 = 0, s12 = 0, s22 = 0, t1 = 0, t2 = 0;
    const double a0 = alphas[static_cast<std::size_t>(i0)];
    const double e0 = errors[static_cast<std::size_t>(i0)];
    for (int i = lo; i <= hi; ++i) {
        const double dx = alphas[static_cast<std::size_t>(i)] - a0;
        const double dy = errors[static_cast<std::size_t>(i)] - e0;
        const double dx2 = dx * dx;
        s11 += dx2;
        s12 += dx2 * dx;
        s22 += dx2 * dx2;
        t1 += dx * dy;
        t2 += dx2 * dy;
    }
    const double det = s11 * s22 - s12 * s12;
    if (!(std::abs(det) > 0.0)) throw DegenerateFit("singular quadratic fit");
    const double b = (s11 * t2 - s12 * t1) / det;

    BasinGeometry g;
    g.alpha_min = a0;
    g.err_min = e0;
    g.curvature = 2.0 * b;
    g.kappa = std::sqrt(std::max(g.curvature, 0.0));
    g.edge = i0 < kHalfWindow || i0 > n - 1 - kHalfWindow;
    return g;
}

BasinGeometry locate_min_and_curvature(const std::function<double(double)>& curve,
                                       const LogGridSpec& grid) {
    const std::vector<double> alphas = log_grid(grid.lo, grid.hi, grid.count);
    std::vector<double> errors;
    errors.reserve(alphas.size());
    for (double a : alphas) errors.push_back(curve(a));
    return locate_min_and_curvature(alphas, errors);
}

double expected_cv_minimum(double mu, double kappa, double delta, int n) {
    if (n < 1) throw DomainError("n must be >= 1");
    if (!(delta > 0.0)) throw DomainError("delta must be > 0");
    const double kd = kappa * delta;
    return mu + kd * kd / ((n + 1.0) * (n + 2.0));
}

MonteCarloEstimate monte_carlo_parabola_min(double mu, double kappa, double delta, int n, int reps,
                                            std::uint64_t seed) {
    if (reps < 1000) throw DomainError("monte_carlo_parabola_min needs reps >= 1000");
    if (n < 1) throw DomainError("n must be >= 1");
    if (!(delta > 0.0)) throw DomainError("delta must be > 0");
    Rng rng(seed);
    std::uniform_real_distribution<double> unif(-delta, delta);
    const double half_k2 = 0.5 * kappa * kappa;
    // Welford accumulation.
    double mean = 0.0, m2 = 0.0;
    for (int r = 0; r < reps; ++r) {
        double best = std::numeric_limits<double>::infinity();
        for (int i = 0; i < n; ++i) {
            const double x = unif(rng);
            best = std::min(best, half_k2 * x * x + mu);
        }
        const double delta_mean = best - mean;
        mean += delta_mean / (r + 1);
        m2 += delta_mean * (best - mean);
    }
    const double var = reps > 1 ? m2 / (reps - 1) : 0.0;
    return {mean, std::sqrt(var / reps)};
}

const GeometryCell& GeometryTable::at(double sigma, double param, SchattenIndex p) const {
    for (const auto& c : cells)
        if (c.sigma == sigma && c.param == param && c.p == p) return c;
    throw DomainError("no geometry cell for the requested key");
}

GeometryTable geometry_table(const GeometryTableSpec& spec) {
    if (spec.sigmas.empty() || spec.params.empty() || spec.estimators.empty())
        throw ConfigError("geometry table needs sigmas, params and estimators");
    GeometryTable table;
    table.ensemble = spec.ensemble;
    table.sigmas = spec.sigmas;
    table.params = spec.params;
    table.estimators = spec.estimators;

    for (double sigma : spec.sigmas) {
        for (double param : spec.params) {
            TheoryParams tp;
            tp.ensemble = spec.ensemble;
            tp.beta = spec.beta;
            tp.sigma = sigma;
            if (spec.ensemble == EnsembleKind::Spherical) {
                tp.lambda = param;
            } else {
                tp.lambda = spec.lambda;
                tp.density = SpectralDensity::power_law(param);
            }
            auto geometry_for = [&](SchattenIndex p) {
                return locate_min_and_curvature(
                    [&](double a) { return theory_error(p, a, tp, spec.method); }, spec.grid);
            };
            const BasinGeometry ridge = geometry_for(SchattenIndex::Frobenius);
            for (SchattenIndex p : spec.estimators) {
                GeometryCell cell;
                cell.sigma = sigma;
                cell.param = param;
                cell.p = p;
                cell.geometry = p == SchattenIndex::Frobenius ? ridge : geometry_for(p);
                cell.depth_increase_pct = 100.0 * (cell.geometry.err_min - ridge.err_min) / ridge.err_min;
                cell.curvature_increase_pct = 100.0 * (cell.geometry.kappa - ridge.kappa) / ridge.kappa;
                table.cells.push_back(cell);
            }
        }
    }
    return table;
}

}  // namespace biasreg
