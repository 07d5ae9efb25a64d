#include "biasreg/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "biasreg/errors.hpp"

namespace biasreg {

std::string_view model_name(SchattenIndex p) {
    switch (p) {
        case SchattenIndex::Nuclear: return "nuclear";
        case SchattenIndex::Frobenius: return "ridge";
        case SchattenIndex::Spectral: return "spectral";
    }
    return "unknown";
}

SchattenIndex parse_model(std::string_view name) {
    if (name == "nuclear" || name == "p1") return SchattenIndex::Nuclear;
    if (name == "ridge" || name == "frobenius" || name == "p2") return SchattenIndex::Frobenius;
    if (name == "spectral" || name == "pinf") return SchattenIndex::Spectral;
    throw ConfigError("unknown model '" + std::string(name) + "'");
}

double identity_schatten_norm(SchattenIndex p, Index d) {
    const double n = static_cast<double>(d);
    switch (p) {
        case SchattenIndex::Nuclear: return n;
        case SchattenIndex::Frobenius: return std::sqrt(n);
        case SchattenIndex::Spectral: return 1.0;
    }
    return n;
}

double schatten_norm(const VectorXd& singular_values, SchattenIndex p) {
    if (singular_values.size() == 0) return 0.0;
    switch (p) {
        case SchattenIndex::Nuclear: return singular_values.cwiseAbs().sum();
        case SchattenIndex::Frobenius: return singular_values.norm();
        case SchattenIndex::Spectral: return singular_values.cwiseAbs().maxCoeff();
    }
    return 0.0;
}

namespace {

void require_finite(const MatrixXd& m, const char* what) {
    if (!m.allFinite()) throw NonFinite(std::string(what) + " contains NaN or Inf");
}

void require_alpha(double alpha) {
    if (std::isnan(alpha) || alpha < 0.0)
        throw DomainError("alpha must be >= 0, got " + std::to_string(alpha));
}

}  // namespace

GramSpectrum GramSpectrum::from_design(const MatrixXd& X) {
    require_finite(X, "design matrix");
    const MatrixXd gram = X.transpose() * X;
    Eigen::SelfAdjointEigenSolver<MatrixXd> solver(gram);
    if (solver.info() != Eigen::Success) throw NonFinite("eigendecomposition of X^T X failed");
    return from_eigensystem(solver.eigenvectors(), solver.eigenvalues(), X.rows());
}

GramSpectrum GramSpectrum::from_eigensystem(MatrixXd eigvecs, VectorXd eigvals, Index n_obs) {
    const Index d = eigvals.size();
    if (eigvecs.rows() != d || eigvecs.cols() != d)
        throw DimensionMismatch("eigenvector matrix must be d x d");

    std::vector<Index> order(static_cast<std::size_t>(d));
    std::iota(order.begin(), order.end(), Index{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](Index a, Index b) { return eigvals(a) > eigvals(b); });

    GramSpectrum s;
    s.n_obs = n_obs;
    s.n_feat = d;
    s.eigvecs.resize(d, d);
    s.eigvals.resize(d);
    for (Index k = 0; k < d; ++k) {
        s.eigvecs.col(k) = eigvecs.col(order[static_cast<std::size_t>(k)]);
        s.eigvals(k) = eigvals(order[static_cast<std::size_t>(k)]);
    }
    const double top = d > 0 ? std::max(s.eigvals(0), 0.0) : 0.0;
    for (Index k = 0; k < d; ++k)
        if (s.eigvals(k) <= kRankTolerance * top) s.eigvals(k) = 0.0;
    return s;
}

Index GramSpectrum::rank() const {
    return static_cast<Index>((eigvals.array() > 0.0).count());
}

BiasBound::BiasBound(double value) : value_(value) {
    if (std::isnan(value) || value < 0.0)
        throw DomainError("bias bound must be >= 0, got " + std::to_string(value));
}

double filter_eigenvalue(SchattenIndex p, double eigval, double alpha) {
    switch (p) {
        case SchattenIndex::Nuclear: return std::max(eigval, alpha);
        case SchattenIndex::Frobenius: return eigval + alpha;
        case SchattenIndex::Spectral: return (1.0 + alpha) * eigval;
    }
    return eigval;
}

double inverse_filter(SchattenIndex p, double eigval, double alpha) {
    if (std::isinf(alpha) || eigval <= 0.0) return 0.0;
    return 1.0 / filter_eigenvalue(p, eigval, alpha);
}

VectorXd filtered_gram_eigvals(const GramSpectrum& spectrum, SchattenIndex p, double alpha) {
    require_alpha(alpha);
    VectorXd out(spectrum.eigvals.size());
    for (Index i = 0; i < out.size(); ++i) out(i) = filter_eigenvalue(p, spectrum.eigvals(i), alpha);
    return out;
}

VectorXd FittedModel::predict(const MatrixXd& X_test) const {
    if (X_test.cols() != beta_hat.size())
        throw DimensionMismatch("test matrix has " + std::to_string(X_test.cols()) +
                                " columns, model has " + std::to_string(beta_hat.size()));
    return X_test * beta_hat;
}

SpectralFitter::SpectralFitter(const MatrixXd& X, const VectorXd& Y) {
    if (X.rows() != Y.size())
        throw DimensionMismatch("X has " + std::to_string(X.rows()) + " rows but Y has " +
                                std::to_string(Y.size()) + " entries");
    require_finite(Y, "target vector");
    spectrum_ = GramSpectrum::from_design(X);
    rotated_xty_ = spectrum_.eigvecs.transpose() * (X.transpose() * Y);
}

VectorXd SpectralFitter::coefficients(SchattenIndex p, double alpha, FitOptions options) const {
    require_alpha(alpha);
    const Index d = spectrum_.n_feat;
    if (p == SchattenIndex::Spectral && options.strict && spectrum_.rank() < d)
        throw SingularGram("rank " + std::to_string(spectrum_.rank()) + " < d = " +
                           std::to_string(d) + " in strict mode");
    if (std::isinf(alpha)) return VectorXd::Zero(d);
    VectorXd scaled(d);
    for (Index i = 0; i < d; ++i)
        scaled(i) = inverse_filter(p, spectrum_.eigvals(i), alpha) * rotated_xty_(i);
    return spectrum_.eigvecs * scaled;
}

FittedModel SpectralFitter::fit(SchattenIndex p, double alpha, FitOptions options) const {
    FittedModel m;
    m.p = p;
    m.alpha = alpha;
    m.beta_hat = coefficients(p, alpha, options);
    m.spectrum = spectrum_;
    return m;
}

FittedModel fit(const MatrixXd& X, const VectorXd& Y, SchattenIndex p, double alpha,
                FitOptions options) {
    return SpectralFitter(X, Y).fit(p, alpha, options);
}

VectorXd predict(const FittedModel& model, const MatrixXd& X_test) { return model.predict(X_test); }

BiasBound alpha_to_bias_bound(const GramSpectrum& spectrum, SchattenIndex p, double alpha) {
    require_alpha(alpha);
    // L X - I = U diag(sigma_i^2 / f(sigma_i^2) - 1) U^T, so its singular
    // values are 1 - sigma_i^2 / f(sigma_i^2).
    VectorXd singular(spectrum.eigvals.size());
    for (Index i = 0; i < singular.size(); ++i) {
        const double s = spectrum.eigvals(i);
        singular(i) = 1.0 - s * inverse_filter(p, s, alpha);
    }
    return BiasBound(std::max(0.0, schatten_norm(singular, p)));
}

double bias_bound_to_alpha(const GramSpectrum& spectrum, SchattenIndex p, BiasBound bound) {
    const double target = bound.value();
    if (target >= identity_schatten_norm(p, spectrum.n_feat)) return kInfiniteAlpha;

    auto bias_at = [&](double a) { return alpha_to_bias_bound(spectrum, p, a).value(); };
    if (bias_at(0.0) >= target) return 0.0;

    double lo = 0.0;
    double hi = 1.0;
    while (bias_at(hi) <= target) {
        lo = hi;
        hi *= 2.0;
        if (!std::isfinite(hi)) return lo;
    }
    for (int iter = 0; iter < 400 && hi - lo > 1e-12 * hi; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (bias_at(mid) < target)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

LinearOperator estimator_operator(const MatrixXd& X, SchattenIndex p, double alpha) {
    require_alpha(alpha);
    const GramSpectrum s = GramSpectrum::from_design(X);
    VectorXd inv(s.n_feat);
    for (Index i = 0; i < inv.size(); ++i) inv(i) = inverse_filter(p, s.eigvals(i), alpha);
    return {s.eigvecs * inv.asDiagonal() * s.eigvecs.transpose() * X.transpose()};
}

OperatorDiagnostics operator_diagnostics(const LinearOperator& L, const MatrixXd& X,
                                         SchattenIndex p) {
    if (L.entries.cols() != X.rows() || L.entries.rows() != X.cols())
        throw DimensionMismatch("operator is " + std::to_string(L.entries.rows()) + "x" +
                                std::to_string(L.entries.cols()) + ", design is " +
                                std::to_string(X.rows()) + "x" + std::to_string(X.cols()));
    const Index d = X.cols();
    const MatrixXd bias = L.entries * X - MatrixXd::Identity(d, d);
    Eigen::JacobiSVD<MatrixXd> svd(bias);
    return {schatten_norm(svd.singularValues(), p), 0.5 * L.entries.squaredNorm()};
}

}  // namespace biasreg
