#pragma once

#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "biasreg/random.hpp"

namespace biasreg {

/// Probability density on [0, 1] for the eigenvalues of a diagonal-ensemble
/// Gram matrix.
class SpectralDensity {
public:
    /// d nu / dx = gamma x^(gamma - 1) on [0, 1].
    struct PowerLaw {
        double gamma = 1.0;
    };
    /// Piecewise-constant density: `weights[k]` is the (unnormalized) mass of
    /// the bin [edges[k], edges[k+1]].
    struct Tabulated {
        std::vector<double> edges;
        std::vector<double> weights;
    };

    static SpectralDensity power_law(double gamma);
    static SpectralDensity tabulated(std::vector<double> edges, std::vector<double> weights);

    double pdf(double x) const;
    double cdf(double x) const;
    double mean() const;
    double sample(Rng& rng) const;

    /// int_0^1 g(x) nu(dx). `breakpoint`, if inside (0, 1), is a point where g
    /// may have a kink; the integration range is split there.
    double integrate(const std::function<double(double)>& g, double abs_tol,
                     double breakpoint = -1.0) const;

    bool is_power_law() const { return std::holds_alternative<PowerLaw>(kind_); }
    /// NaN unless power law.
    double gamma() const;
    std::string describe() const;

private:
    explicit SpectralDensity(std::variant<PowerLaw, Tabulated> kind);
    std::variant<PowerLaw, Tabulated> kind_;
    std::vector<double> bin_mass_;  // normalized, tabulated only
};

}  // namespace biasreg
