#include "biasreg/spectral_density.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "biasreg/errors.hpp"
#include "biasreg/quadrature.hpp"

namespace biasreg {

SpectralDensity::SpectralDensity(std::variant<PowerLaw, Tabulated> kind) : kind_(std::move(kind)) {}

SpectralDensity SpectralDensity::power_law(double gamma) {
    if (!(gamma > 0.0) || !std::isfinite(gamma))
        throw InvalidConfig("power-law exponent gamma must be > 0");
    return SpectralDensity(PowerLaw{gamma});
}

SpectralDensity SpectralDensity::tabulated(std::vector<double> edges, std::vector<double> weights) {
    if (edges.size() < 2 || weights.size() + 1 != edges.size())
        throw InvalidConfig("tabulated density needs K+1 edges and K weights");
    if (edges.front() < 0.0 || edges.back() > 1.0)
        throw InvalidConfig("tabulated density must be supported on [0, 1]");
    for (std::size_t k = 0; k + 1 < edges.size(); ++k)
        if (!(edges[k + 1] > edges[k])) throw InvalidConfig("edges must be strictly increasing");
    double total = 0.0;
    for (double w : weights) {
        if (!(w >= 0.0) || !std::isfinite(w)) throw InvalidConfig("weights must be >= 0");
        total += w;
    }
    if (!(total > 0.0)) throw InvalidConfig("weights must not all be zero");
    SpectralDensity s(Tabulated{std::move(edges), weights});
    s.bin_mass_.resize(weights.size());
    for (std::size_t k = 0; k < weights.size(); ++k) s.bin_mass_[k] = weights[k] / total;
    return s;
}

double SpectralDensity::pdf(double x) const {
    if (x < 0.0 || x > 1.0) return 0.0;
    if (const auto* pl = std::get_if<PowerLaw>(&kind_)) return pl->gamma * std::pow(x, pl->gamma - 1.0);
    const auto& t = std::get<Tabulated>(kind_);
    for (std::size_t k = 0; k < bin_mass_.size(); ++k)
        if (x >= t.edges[k] && x <= t.edges[k + 1]) return bin_mass_[k] / (t.edges[k + 1] - t.edges[k]);
    return 0.0;
}

double SpectralDensity::cdf(double x) const {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    if (const auto* pl = std::get_if<PowerLaw>(&kind_)) return std::pow(x, pl->gamma);
    const auto& t = std::get<Tabulated>(kind_);
    double acc = 0.0;
    for (std::size_t k = 0; k < bin_mass_.size(); ++k) {
        const double lo = t.edges[k], hi = t.edges[k + 1];
        if (x >= hi) acc += bin_mass_[k];
        else if (x > lo) acc += bin_mass_[k] * (x - lo) / (hi - lo);
    }
    return acc;
}

double SpectralDensity::mean() const {
    if (const auto* pl = std::get_if<PowerLaw>(&kind_)) return pl->gamma / (pl->gamma + 1.0);
    const auto& t = std::get<Tabulated>(kind_);
    double m = 0.0;
    for (std::size_t k = 0; k < bin_mass_.size(); ++k) m += bin_mass_[k] * 0.5 * (t.edges[k] + t.edges[k + 1]);
    return m;
}

double SpectralDensity::sample(Rng& rng) const {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    if (const auto* pl = std::get_if<PowerLaw>(&kind_)) return std::pow(unit(rng), 1.0 / pl->gamma);
    const auto& t = std::get<Tabulated>(kind_);
    std::discrete_distribution<std::size_t> bin(bin_mass_.begin(), bin_mass_.end());
    const std::size_t k = bin(rng);
    return t.edges[k] + (t.edges[k + 1] - t.edges[k]) * unit(rng);
}

double SpectralDensity::integrate(const std::function<double(double)>& g, double abs_tol,
                                  double breakpoint) const {
    if (const auto* pl = std::get_if<PowerLaw>(&kind_)) {
        // v = x^gamma turns nu(dx) into dv on [0, 1].
        const double inv = 1.0 / pl->gamma;
        auto h = [&](double v) { return g(std::pow(v, inv)); };
        if (breakpoint > 0.0 && breakpoint < 1.0) {
            const double vb = std::pow(breakpoint, pl->gamma);
            return integrate_adaptive(h, 0.0, vb, 0.5 * abs_tol) +
                   integrate_adaptive(h, vb, 1.0, 0.5 * abs_tol);
        }
        return integrate_adaptive(h, 0.0, 1.0, abs_tol);
    }
    const auto& t = std::get<Tabulated>(kind_);
    const double per_bin = abs_tol / static_cast<double>(2 * bin_mass_.size());
    double acc = 0.0;
    for (std::size_t k = 0; k < bin_mass_.size(); ++k) {
        const double lo = t.edges[k], hi = t.edges[k + 1];
        const double density = bin_mass_[k] / (hi - lo);
        if (density == 0.0) continue;
        if (breakpoint > lo && breakpoint < hi)
            acc += density * (integrate_adaptive(g, lo, breakpoint, per_bin / density) +
                              integrate_adaptive(g, breakpoint, hi, per_bin / density));
        else
            acc += density * integrate_adaptive(g, lo, hi, 2.0 * per_bin / density);
    }
    return acc;
}

double SpectralDensity::gamma() const {
    if (const auto* pl = std::get_if<PowerLaw>(&kind_)) return pl->gamma;
    return std::numeric_limits<double>::quiet_NaN();
}

std::string SpectralDensity::describe() const {
    std::ostringstream os;
    if (const auto* pl = std::get_if<PowerLaw>(&kind_)) {
        os << "power_law(gamma=" << pl->gamma << ")";
    } else {
        os << "tabulated(" << bin_mass_.size() << " bins)";
    }
    return os.str();
}

}  // namespace biasreg
