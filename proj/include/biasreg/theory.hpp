#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "biasreg/estimator.hpp"
#include "biasreg/spectral_density.hpp"

namespace biasreg {

/// Marchenko-Pastur law with ratio lambda = d / N in (0, 1): the limiting
/// eigenvalue density of X^T X for an N x d matrix with N(0, 1/N) entries.
class MarchenkoPastur {
public:
    explicit MarchenkoPastur(double lambda);

    double lambda() const { return lambda_; }
    double lower() const { return lower_; }  // (1 - sqrt(lambda))^2
    double upper() const { return upper_; }  // (1 + sqrt(lambda))^2

    double pdf(double x) const;
    /// Adaptive quadrature of pdf; exactly 0 / 1 outside the support.
    double cdf(double x) const;

    /// int_{from}^{to} g(x) mu(dx), limits clipped to the support. Uses
    /// x = lower + (upper - lower) sin^2(theta) to remove the square-root edges.
    double integrate(const std::function<double(double)>& g, double from, double to,
                     double abs_tol = 1e-11) const;

private:
    double lambda_;
    double lower_;
    double upper_;
};

double mp_pdf(const MarchenkoPastur& mp, double x);
double mp_cdf(const MarchenkoPastur& mp, double x);

/// x / f_alpha(x), with the limiting values at x = 0 and alpha = inf.
double shrink_ratio(SchattenIndex p, double x, double alpha);

/// Thermodynamic-limit test error in the spherical Gaussian ensemble by
/// quadrature against the Marchenko-Pastur law (absolute tolerance 1e-9).
double err_spherical_quadrature(SchattenIndex p, double alpha, double lambda, double beta,
                                double sigma);

/// (lambda beta^2 alpha^2 + lambda sigma^2 / (1 - lambda)) / (1 + alpha)^2.
double err_spectral_closed(double alpha, double lambda, double beta, double sigma);

/// I(r, alpha) = int_{lower}^{alpha} x^r mu(dx), evaluated through the Appell
/// F1 Euler integral. alpha is clipped to the support.
double mp_partial_moment(double lambda, int r, double alpha);

/// Piecewise closed form for the nuclear estimator: constant below the
/// support, polynomial in 1/alpha above it, and the partial-moment
/// decomposition inside it.
double err_nuclear_closed(double alpha, double lambda, double beta, double sigma);

/// Test error in the diagonal (Stiefel) ensemble by quadrature against the
/// spectral density (absolute tolerance 1e-9).
double err_diagonal_quadrature(SchattenIndex p, double alpha, double lambda, double beta,
                               double sigma, const SpectralDensity& density);

/// The optimal ridge strength sigma^2 / beta^2. Throws DivisionByZero for beta = 0.
double oracle_ridge_alpha(double beta, double sigma);

enum class EnsembleKind { Spherical, Diagonal };

std::string_view ensemble_name(EnsembleKind kind);
EnsembleKind parse_ensemble(std::string_view name);

/// Hyperparameters of a theory curve.
struct TheoryParams {
    EnsembleKind ensemble = EnsembleKind::Spherical;
    double lambda = 0.5;
    double beta = 1.0;
    double sigma = 1.0;
    SpectralDensity density = SpectralDensity::power_law(1.0);  // diagonal only
};

enum class TheoryMethod {
    Quadrature,  // the integral formula for every estimator
    Closed,      // closed forms where they exist, quadrature otherwise
};

double theory_error(SchattenIndex p, double alpha, const TheoryParams& params,
                    TheoryMethod method = TheoryMethod::Quadrature);

struct TheoryCurve {
    SchattenIndex p = SchattenIndex::Frobenius;
    EnsembleKind ensemble = EnsembleKind::Spherical;
    std::vector<double> alphas;
    std::vector<double> errors;
    double lambda = 0.0;
    double beta = 0.0;
    double sigma = 0.0;
    double gamma = 0.0;  // NaN for the spherical ensemble
};

TheoryCurve theory_curve(SchattenIndex p, const TheoryParams& params,
                         const std::vector<double>& alphas,
                         TheoryMethod method = TheoryMethod::Quadrature);

/// `count` log-spaced values from lo to hi inclusive (count = 1 gives {lo}).
std::vector<double> log_grid(double lo, double hi, int count);

}  // namespace biasreg
