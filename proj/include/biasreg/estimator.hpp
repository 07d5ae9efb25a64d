#pragma once

#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace biasreg {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

/// Which Schatten norm bounds the bias operator B = LX - I.
///
/// Nuclear (p=1), Frobenius (p=2, i.e. ridge) and Spectral (p=inf) are the
/// only three indices with closed-form optimal estimators. The enumerator
/// order is also the canonical (lexicographic) model order used for ties.
enum class SchattenIndex { Nuclear, Frobenius, Spectral };

inline constexpr SchattenIndex kAllEstimators[] = {
    SchattenIndex::Nuclear, SchattenIndex::Frobenius, SchattenIndex::Spectral};

/// "nuclear", "ridge", "spectral".
std::string_view model_name(SchattenIndex p);
/// Accepts the model names above plus "frobenius", "p1", "p2", "pinf".
SchattenIndex parse_model(std::string_view name);

/// ||I_d||_p = d^{1/p}; the bias bound beyond which the optimum is L = 0.
double identity_schatten_norm(SchattenIndex p, Index d);

/// Schatten-p norm from a vector of (nonnegative) singular values.
double schatten_norm(const VectorXd& singular_values, SchattenIndex p);

/// Regularization strength meaning "shrink all the way to zero".
inline constexpr double kInfiniteAlpha = std::numeric_limits<double>::infinity();

/// Eigendecomposition of the Gram matrix G = X^T X.
///
/// Eigenvalues are sorted in descending order. Values below
/// kRankTolerance * max eigenvalue are stored as exact zeros.
struct GramSpectrum {
    static constexpr double kRankTolerance = 1e-12;

    MatrixXd eigvecs;  // d x d orthogonal
    VectorXd eigvals;  // descending, >= 0
    Index n_obs = 0;
    Index n_feat = 0;

    static GramSpectrum from_design(const MatrixXd& X);
    /// Build from an explicit (eigvecs, eigvals) pair; sorts and validates.
    static GramSpectrum from_eigensystem(MatrixXd eigvecs, VectorXd eigvals, Index n_obs);

    Index rank() const;
};

/// Upper bound C on the Schatten norm of the bias operator.
class BiasBound {
public:
    explicit BiasBound(double value);
    double value() const { return value_; }

private:
    double value_;
};

struct FitOptions {
    /// Raise SingularGram for the spectral estimator on a rank-deficient Gram
    /// instead of falling back to the scaled minimum-norm solution.
    bool strict = false;
};

/// Eigenvalue map x -> f_alpha(x): max(x, a), x + a or (1 + a) x.
double filter_eigenvalue(SchattenIndex p, double eigval, double alpha);

/// 1 / f_alpha(x) with the conventions used for fitting: zero eigenvalues map
/// to 0 (pseudo-inverse), and alpha = inf maps everything to 0.
double inverse_filter(SchattenIndex p, double eigval, double alpha);

/// Eigenvalues of G-hat for the given estimator; dominate the raw eigenvalues.
VectorXd filtered_gram_eigvals(const GramSpectrum& spectrum, SchattenIndex p, double alpha);

struct FittedModel {
    SchattenIndex p = SchattenIndex::Frobenius;
    double alpha = 0.0;
    VectorXd beta_hat;
    GramSpectrum spectrum;

    VectorXd predict(const MatrixXd& X_test) const;
};

/// Caches the spectrum of X^T X and U^T X^T Y so that coefficients for many
/// (p, alpha) pairs cost O(d^2) each.
class SpectralFitter {
public:
    SpectralFitter(const MatrixXd& X, const VectorXd& Y);

    const GramSpectrum& spectrum() const { return spectrum_; }
    VectorXd coefficients(SchattenIndex p, double alpha, FitOptions options = {}) const;
    FittedModel fit(SchattenIndex p, double alpha, FitOptions options = {}) const;

private:
    GramSpectrum spectrum_;
    VectorXd rotated_xty_;
};

FittedModel fit(const MatrixXd& X, const VectorXd& Y, SchattenIndex p, double alpha,
                FitOptions options = {});

VectorXd predict(const FittedModel& model, const MatrixXd& X_test);

/// Schatten-p norm of the bias operator of the estimator with strength alpha.
BiasBound alpha_to_bias_bound(const GramSpectrum& spectrum, SchattenIndex p, double alpha);

/// Inverse of alpha_to_bias_bound. Returns kInfiniteAlpha when C >= d^{1/p}.
double bias_bound_to_alpha(const GramSpectrum& spectrum, SchattenIndex p, BiasBound bound);

/// A linear estimator beta-hat = L Y, stored as the d x N matrix L.
struct LinearOperator {
    MatrixXd entries;
};

/// L = U diag(1/f_alpha(sigma_i^2)) U^T X^T.
LinearOperator estimator_operator(const MatrixXd& X, SchattenIndex p, double alpha);

struct OperatorDiagnostics {
    double bias_norm = 0.0;       // ||L X - I||_p
    double variance_trace = 0.0;  // Tr(L L^T) / 2
};

OperatorDiagnostics operator_diagnostics(const LinearOperator& L, const MatrixXd& X,
                                         SchattenIndex p);

}  // namespace biasreg
