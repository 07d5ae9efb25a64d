#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "biasreg/estimator.hpp"
#include "biasreg/theory.hpp"

namespace biasreg {

/// Log-spaced alpha grid used for locating curve minima.
struct LogGridSpec {
    double lo = 1e-3;
    double hi = 1e5;
    int count = 500;
};

/// Depth and curvature of an error curve at its grid minimum.
struct BasinGeometry {
    double alpha_min = 0.0;
    double err_min = 0.0;
    double curvature = 0.0;  // second derivative in alpha at the minimum
    double kappa = 0.0;      // sqrt(max(curvature, 0))
    bool edge = false;       // minimum within the half-window of a grid end
};

/// Grid minimum, then least-squares fit of
///   Err(a_i) - Err(a_0) ~ s (a_i - a_0) + b (a_i - a_0)^2
/// over the 11 points centred on the minimum (clipped at the grid ends);
/// curvature = 2 b. Throws DegenerateFit with fewer than 3 distinct points.
BasinGeometry locate_min_and_curvature(const std::function<double(double)>& curve,
                                       const LogGridSpec& grid = {});

/// Same, for a curve already sampled at `alphas` (ascending).
BasinGeometry locate_min_and_curvature(const std::vector<double>& alphas,
                                       const std::vector<double>& errors);

/// mu + (kappa delta)^2 / ((n + 1)(n + 2)): expected minimum of a parabola
/// kappa^2 x^2 / 2 + mu over n uniform samples on [-delta, delta].
double expected_cv_minimum(double mu, double kappa, double delta, int n);

struct MonteCarloEstimate {
    double mean = 0.0;
    double std_error = 0.0;
};

/// Simulates the expectation above directly.
MonteCarloEstimate monte_carlo_parabola_min(double mu, double kappa, double delta, int n,
                                            int reps, std::uint64_t seed);

struct GeometryCell {
    double sigma = 0.0;
    double param = 0.0;  // lambda (spherical) or gamma (diagonal)
    SchattenIndex p = SchattenIndex::Frobenius;
    BasinGeometry geometry;
    double depth_increase_pct = 0.0;      // vs ridge at the same (sigma, param)
    double curvature_increase_pct = 0.0;  // kappa vs ridge kappa
};

struct GeometryTable {
    EnsembleKind ensemble = EnsembleKind::Spherical;
    std::vector<double> sigmas;
    std::vector<double> params;
    std::vector<SchattenIndex> estimators;
    std::vector<GeometryCell> cells;  // sigma-major, then param, then estimator

    const GeometryCell& at(double sigma, double param, SchattenIndex p) const;
};

struct GeometryTableSpec {
    EnsembleKind ensemble = EnsembleKind::Spherical;
    std::vector<double> sigmas{0.5, 1.0, 2.0, 3.5};
    std::vector<double> params{0.1, 0.3, 0.5, 0.7, 0.9};
    double beta = 1.0;
    double lambda = 0.5;  // diagonal ensemble only; params are then gammas
    std::vector<SchattenIndex> estimators{SchattenIndex::Nuclear, SchattenIndex::Frobenius,
                                          SchattenIndex::Spectral};
    LogGridSpec grid{};
    TheoryMethod method = TheoryMethod::Quadrature;
};

/// Depth and curvature of every estimator's theory curve, as percentage
/// increases over ridge in the same cell. Ridge cells are 0 / 0.
GeometryTable geometry_table(const GeometryTableSpec& spec);

}  // namespace biasreg
