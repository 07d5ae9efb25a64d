#include "biasreg/theory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "biasreg/appell.hpp"
#include "biasreg/errors.hpp"
#include "biasreg/quadrature.hpp"

namespace biasreg {

namespace {

constexpr double kTheoryTolerance = 1e-9;

void require_ratio(double lambda) {
    if (!(lambda > 0.0 && lambda < 1.0))
        throw DomainError("lambda must lie in (0, 1), got " + std::to_string(lambda));
}

void require_alpha(double alpha) {
    if (std::isnan(alpha) || alpha < 0.0) throw DomainError("alpha must be >= 0");
}

}  // namespace

MarchenkoPastur::MarchenkoPastur(double lambda) : lambda_(lambda) {
    require_ratio(lambda);
    const double r = std::sqrt(lambda);
    lower_ = (1.0 - r) * (1.0 - r);
    upper_ = (1.0 + r) * (1.0 + r);
}

double MarchenkoPastur::pdf(double x) const {
    if (x <= lower_ || x >= upper_) return 0.0;
    return std::sqrt((upper_ - x) * (x - lower_)) / (2.0 * std::numbers::pi * lambda_ * x);
}

double MarchenkoPastur::cdf(double x) const {
    if (x <= lower_) return 0.0;
    if (x >= upper_) return 1.0;
    return std::clamp(integrate([](double) { return 1.0; }, lower_, x, 1e-12), 0.0, 1.0);
}

double MarchenkoPastur::integrate(const std::function<double(double)>& g, double from, double to,
                                  double abs_tol) const {
    from = std::clamp(from, lower_, upper_);
    to = std::clamp(to, lower_, upper_);
    if (to <= from) return 0.0;
    const double width = upper_ - lower_;
    auto angle = [&](double x) { return std::asin(std::sqrt(std::clamp((x - lower_) / width, 0.0, 1.0))); };
    // mu(dx) = width^2 sin^2 cos^2 / (pi lambda x) d theta
    const double scale = width * width / (std::numbers::pi * lambda_);
    auto h = [&](double theta) {
        const double s = std::sin(theta), c = std::cos(theta);
        const double x = lower_ + width * s * s;
        return g(x) * scale * s * s * c * c / x;
    };
    return integrate_adaptive(h, angle(from), angle(to), abs_tol);
}

double mp_pdf(const MarchenkoPastur& mp, double x) { return mp.pdf(x); }
double mp_cdf(const MarchenkoPastur& mp, double x) { return mp.cdf(x); }

double shrink_ratio(SchattenIndex p, double x, double alpha) {
    if (std::isinf(alpha)) return 0.0;
    switch (p) {
        case SchattenIndex::Nuclear: return (alpha == 0.0 || x >= alpha) ? 1.0 : x / alpha;
        case SchattenIndex::Frobenius: return (x + alpha == 0.0) ? 1.0 : x / (x + alpha);
        case SchattenIndex::Spectral: return 1.0 / (1.0 + alpha);
    }
    return 1.0;
}

double err_spherical_quadrature(SchattenIndex p, double alpha, double lambda, double beta,
                                double sigma) {
    require_alpha(alpha);
    const MarchenkoPastur mp(lambda);
    if (std::isinf(alpha)) return lambda * beta * beta;
    const double b2 = beta * beta, s2 = sigma * sigma;
    auto integrand = [&](double x) {
        const double r = shrink_ratio(p, x, alpha);
        return b2 * (1.0 - r) * (1.0 - r) + s2 * r * r / x;
    };
    double total = 0.0;
    if (p == SchattenIndex::Nuclear && alpha > mp.lower() && alpha < mp.upper()) {
        total = mp.integrate(integrand, mp.lower(), alpha, 0.5 * kTheoryTolerance / lambda) +
                mp.integrate(integrand, alpha, mp.upper(), 0.5 * kTheoryTolerance / lambda);
    } else {
        total = mp.integrate(integrand, mp.lower(), mp.upper(), kTheoryTolerance / lambda);
    }
    return lambda * total;
}

double err_spectral_closed(double alpha, double lambda, double beta, double sigma) {
    require_alpha(alpha);
    require_ratio(lambda);
    if (std::isinf(alpha)) return lambda * beta * beta;
    const double num = lambda * beta * beta * alpha * alpha + lambda * sigma * sigma / (1.0 - lambda);
    return num / ((1.0 + alpha) * (1.0 + alpha));
}

double mp_partial_moment(double lambda, int r, double alpha) {
    const MarchenkoPastur mp(lambda);
    const double lo = mp.lower(), hi = mp.upper();
    alpha = std::clamp(alpha, lo, hi);
    if (alpha <= lo) return 0.0;
    // 2 pi lambda I(r) = (alpha - lo)^{3/2} lo^{r-1} sqrt(hi - lo)
    //                    * (2/3) F1(3/2; 1-r, -1/2; 5/2; 1 - alpha/lo, (alpha-lo)/(hi-lo))
    const double span = alpha - lo;
    const AppellF1Args args{1.5, 1.0 - r, -0.5, 2.5, 1.0 - alpha / lo, span / (hi - lo)};
    const double f1 = appell_f1(args);
    return std::pow(span, 1.5) * std::pow(lo, r - 1) * std::sqrt(hi - lo) * (2.0 / 3.0) * f1 /
           (2.0 * std::numbers::pi * lambda);
}

double err_nuclear_closed(double alpha, double lambda, double beta, double sigma) {
    require_alpha(alpha);
    const MarchenkoPastur mp(lambda);
    const double b2 = beta * beta, s2 = sigma * sigma;
    if (std::isinf(alpha)) return lambda * b2;
    if (alpha <= mp.lower()) return s2 * lambda / (1.0 - lambda);
    if (alpha >= mp.upper()) {
        // First two MP moments are 1 and 1 + lambda.
        return lambda * b2 * (1.0 + lambda) / (alpha * alpha) +
               (lambda * s2 - 2.0 * lambda * alpha * b2) / (alpha * alpha) + lambda * b2;
    }
    const double i2 = mp_partial_moment(lambda, 2, alpha);
    const double i1 = mp_partial_moment(lambda, 1, alpha);
    const double im1 = mp_partial_moment(lambda, -1, alpha);
    const double cdf = mp.cdf(alpha);
    const double reduced = b2 * i2 / (alpha * alpha) + (s2 / (alpha * alpha) - 2.0 * b2 / alpha) * i1 -
                           b2 * (1.0 - cdf) + s2 * (1.0 / (1.0 - lambda) - im1);
    return lambda * (reduced + b2);
}

double err_diagonal_quadrature(SchattenIndex p, double alpha, double lambda, double beta,
                               double sigma, const SpectralDensity& density) {
    require_alpha(alpha);
    if (!(lambda > 0.0)) throw DomainError("lambda must be > 0");
    const double b2 = beta * beta, s2 = sigma * sigma;
    if (std::isinf(alpha)) return lambda * b2 * density.mean();
    auto integrand = [&](double x) {
        const double r = shrink_ratio(p, x, alpha);
        return b2 * x * (1.0 - r) * (1.0 - r) + s2 * r * r;
    };
    const double kink = p == SchattenIndex::Nuclear ? alpha : -1.0;
    return lambda * density.integrate(integrand, kTheoryTolerance / lambda, kink);
}

double oracle_ridge_alpha(double beta, double sigma) {
    if (beta == 0.0) throw DivisionByZero("oracle ridge strength needs beta != 0");
    return sigma * sigma / (beta * beta);
}

std::string_view ensemble_name(EnsembleKind kind) {
    return kind == EnsembleKind::Spherical ? "spherical" : "diagonal";
}

EnsembleKind parse_ensemble(std::string_view name) {
    if (name == "spherical") return EnsembleKind::Spherical;
    if (name == "diagonal") return EnsembleKind::Diagonal;
    throw ConfigError("unknown theory ensemble '" + std::string(name) + "'");
}

double theory_error(SchattenIndex p, double alpha, const TheoryParams& params, TheoryMethod method) {
    if (params.ensemble == EnsembleKind::Diagonal)
        return err_diagonal_quadrature(p, alpha, params.lambda, params.beta, params.sigma,
                                       params.density);
    if (method == TheoryMethod::Closed) {
        if (p == SchattenIndex::Spectral)
            return err_spectral_closed(alpha, params.lambda, params.beta, params.sigma);
        if (p == SchattenIndex::Nuclear)
            return err_nuclear_closed(alpha, params.lambda, params.beta, params.sigma);
    }
    return err_spherical_quadrature(p, alpha, params.lambda, params.beta, params.sigma);
}

TheoryCurve theory_curve(SchattenIndex p, const TheoryParams& params,
                         const std::vector<double>& alphas, TheoryMethod method) {
    TheoryCurve curve;
    curve.p = p;
    curve.ensemble = params.ensemble;
    curve.alphas = alphas;
    curve.lambda = params.lambda;
    curve.beta = params.beta;
    curve.sigma = params.sigma;
    curve.gamma = params.ensemble == EnsembleKind::Diagonal
                      ? params.density.gamma()
                      : std::numeric_limits<double>::quiet_NaN();
    curve.errors.reserve(alphas.size());
    for (double a : alphas) curve.errors.push_back(theory_error(p, a, params, method));
    return curve;
}

std::vector<double> log_grid(double lo, double hi, int count) {
    if (count < 1) throw ConfigError("grid needs at least one point");
    if (count == 1) return {lo};
    if (!(lo > 0.0) || !(hi > lo)) throw ConfigError("log grid needs 0 < lo < hi");
    std::vector<double> out(static_cast<std::size_t>(count));
    const double a = std::log10(lo), b = std::log10(hi);
    for (int i = 0; i < count; ++i)
        out[static_cast<std::size_t>(i)] = std::pow(10.0, a + (b - a) * i / (count - 1));
    out.front() = lo;
    out.back() = hi;
    return out;
}

}  // namespace biasreg
