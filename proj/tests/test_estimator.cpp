#include <gtest/gtest.h>

#include <cmath>
#include <functional>

#include "biasreg/errors.hpp"
#include "biasreg/estimator.hpp"
#include "biasreg/random.hpp"
#include "oracles.hpp"

namespace biasreg {
namespace {

// Diag(sqrt(1), ..., sqrt(10)): the Gram matrix is diag(1..10).
MatrixXd sqrt_diag_design() {
    VectorXd d(10);
    for (int i = 0; i < 10; ++i) d(i) = std::sqrt(i + 1.0);
    return d.asDiagonal();
}

double bisect(const std::function<double(double)>& f, double target, double lo, double hi) {
    // f increasing on [lo, hi]
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (f(mid) < target ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

TEST(FilteredEigvals, NuclearClipsAtAlpha) {
    const auto s = GramSpectrum::from_design(sqrt_diag_design());
    const VectorXd f = filtered_gram_eigvals(s, SchattenIndex::Nuclear, 5.0);
    const double expected[] = {10, 9, 8, 7, 6, 5, 5, 5, 5, 5};
    for (int i = 0; i < 10; ++i) EXPECT_NEAR(f(i), expected[i], 1e-12);
}

TEST(FilteredEigvals, ZeroAlphaIsIdentity) {
    const auto s = GramSpectrum::from_design(sqrt_diag_design());
    for (auto p : kAllEstimators) EXPECT_TRUE(filtered_gram_eigvals(s, p, 0.0).isApprox(s.eigvals, 1e-15));
}

TEST(FilteredEigvals, RidgeIsAdditive) {
    MatrixXd X(2, 2);
    X << std::sqrt(2.0), 0, 0, 1;
    const VectorXd f = filtered_gram_eigvals(GramSpectrum::from_design(X), SchattenIndex::Frobenius, 0.5);
    EXPECT_NEAR(f(0), 2.5, 1e-12);
    EXPECT_NEAR(f(1), 1.5, 1e-12);
}

TEST(FilteredEigvals, DominatesRawSpectrum) {
    Rng rng(3);
    const auto s = GramSpectrum::from_design(gaussian_matrix(rng, 30, 8));
    for (auto p : kAllEstimators)
        for (double a : {0.0, 0.01, 0.7, 3.0, 1e4}) {
            const VectorXd f = filtered_gram_eigvals(s, p, a);
            for (Index i = 0; i < f.size(); ++i) EXPECT_GE(f(i), s.eigvals(i));
        }
}

TEST(FilteredEigvals, NegativeAlphaRejected) {
    const auto s = GramSpectrum::from_design(sqrt_diag_design());
    EXPECT_THROW(filtered_gram_eigvals(s, SchattenIndex::Frobenius, -1.0), DomainError);
}

TEST(GramSpectrum, OrthonormalAndDescending) {
    Rng rng(11);
    const auto s = GramSpectrum::from_design(gaussian_matrix(rng, 40, 7));
    EXPECT_LT((s.eigvecs.transpose() * s.eigvecs - MatrixXd::Identity(7, 7)).norm(), 1e-10);
    for (Index i = 1; i < 7; ++i) EXPECT_GE(s.eigvals(i - 1), s.eigvals(i));
    EXPECT_GE(s.eigvals.minCoeff(), 0.0);
    EXPECT_EQ(s.rank(), 7);
}

TEST(Fit, IdentityDesignOlsReturnsTargets) {
    const VectorXd y = (VectorXd(4) << 1.0, -2.0, 0.5, 3.0).finished();
    for (auto p : kAllEstimators) {
        const FittedModel m = fit(MatrixXd::Identity(4, 4), y, p, 0.0);
        EXPECT_LT((m.beta_hat - y).norm(), 1e-12) << model_name(p);
    }
}

TEST(Fit, SpectralHalvesAtAlphaOne) {
    const MatrixXd X = sqrt_diag_design();
    Rng rng(5);
    const VectorXd beta0 = gaussian_vector(rng, 10);
    const FittedModel m = fit(X, X * beta0, SchattenIndex::Spectral, 1.0);
    EXPECT_LT((m.beta_hat - beta0 / 2.0).norm(), 1e-12);

    const VectorXd x = gaussian_vector(rng, 10);
    EXPECT_NEAR(m.predict(x.transpose())(0), x.dot(beta0) / 2.0, 1e-12);
}

TEST(Fit, RidgeMatchesNormalEquations) {
    Rng rng(17);
    const MatrixXd X = gaussian_matrix(rng, 25, 6);
    const VectorXd Y = gaussian_vector(rng, 25);
    for (double a : {0.01, 0.3, 4.0}) {
        const VectorXd b = fit(X, Y, SchattenIndex::Frobenius, a).beta_hat;
        EXPECT_LT((b - oracle::ridge_normal_equations(X, Y, a)).norm(), 1e-10 * b.norm());
    }
}

TEST(Fit, NuclearOnDiagonalDesignClipsEachCoordinate) {
    const MatrixXd X = sqrt_diag_design();
    const VectorXd Y = VectorXd::Ones(10);
    const VectorXd b = fit(X, Y, SchattenIndex::Nuclear, 5.0).beta_hat;
    for (int i = 0; i < 10; ++i) {
        const double g = i + 1.0;
        EXPECT_NEAR(b(i), std::sqrt(g) / std::max(g, 5.0), 1e-12);
    }
}

TEST(Fit, AllEstimatorsCollapseToOlsAtZeroAlpha) {
    Rng rng(23);
    const MatrixXd X = gaussian_matrix(rng, 20, 5);
    const VectorXd Y = gaussian_vector(rng, 20);
    const VectorXd ols = X.colPivHouseholderQr().solve(Y);
    for (auto p : kAllEstimators) EXPECT_LT((fit(X, Y, p, 0.0).beta_hat - ols).norm(), 1e-10);
}

TEST(Fit, InfiniteAlphaGivesZero) {
    Rng rng(2);
    const MatrixXd X = gaussian_matrix(rng, 10, 3);
    for (auto p : kAllEstimators)
        EXPECT_EQ(fit(X, gaussian_vector(rng, 10), p, kInfiniteAlpha).beta_hat, VectorXd::Zero(3));
}

TEST(Fit, RejectsNonFiniteInput) {
    MatrixXd X = MatrixXd::Identity(3, 3);
    X(1, 2) = std::nan("");
    EXPECT_THROW(fit(X, VectorXd::Ones(3), SchattenIndex::Frobenius, 1.0), NonFinite);
    EXPECT_THROW(fit(MatrixXd::Identity(3, 3), VectorXd::Constant(3, INFINITY), SchattenIndex::Frobenius, 1.0),
                 NonFinite);
}

TEST(Fit, RankDeficientSpectralStrictMode) {
    Rng rng(9);
    const MatrixXd X = gaussian_matrix(rng, 4, 8);  // d > N
    const VectorXd Y = gaussian_vector(rng, 4);
    EXPECT_THROW(fit(X, Y, SchattenIndex::Spectral, 1.0, FitOptions{true}), SingularGram);
    // Lenient mode: min-norm least squares scaled by 1 / (1 + alpha).
    const VectorXd min_norm = X.completeOrthogonalDecomposition().solve(Y);
    EXPECT_LT((fit(X, Y, SchattenIndex::Spectral, 1.0).beta_hat - min_norm / 2.0).norm(), 1e-9);
    // Ridge in the overparametrized regime still matches the normal equations.
    EXPECT_LT((fit(X, Y, SchattenIndex::Frobenius, 0.5).beta_hat - oracle::ridge_normal_equations(X, Y, 0.5)).norm(),
              1e-9);
}

TEST(Fit, Deterministic) {
    Rng rng(31);
    const MatrixXd X = gaussian_matrix(rng, 30, 6);
    const VectorXd Y = gaussian_vector(rng, 30);
    for (auto p : kAllEstimators) EXPECT_EQ(fit(X, Y, p, 0.37).beta_hat, fit(X, Y, p, 0.37).beta_hat);
}

TEST(Predict, Basics) {
    FittedModel m;
    m.beta_hat = VectorXd::Zero(3);
    EXPECT_EQ(m.predict(MatrixXd::Ones(5, 3)), VectorXd::Zero(5));
    m.beta_hat = (VectorXd(3) << 1, 2, 3).finished();
    EXPECT_EQ(predict(m, MatrixXd::Identity(3, 3)), m.beta_hat);
    EXPECT_THROW(m.predict(MatrixXd::Ones(2, 4)), DimensionMismatch);
}

TEST(BiasBound, HandEvaluatedValues) {
    const auto s = GramSpectrum::from_design(sqrt_diag_design());
    EXPECT_NEAR(alpha_to_bias_bound(s, SchattenIndex::Spectral, 1.0).value(), 0.5, 1e-14);
    EXPECT_NEAR(alpha_to_bias_bound(s, SchattenIndex::Nuclear, 5.0).value(), 2.0, 1e-14);
    double ridge = 0.0;
    for (int i = 1; i <= 10; ++i) ridge += std::pow(3.0 / (i + 3.0), 2);
    EXPECT_NEAR(alpha_to_bias_bound(s, SchattenIndex::Frobenius, 3.0).value(), std::sqrt(ridge), 1e-14);
    for (auto p : kAllEstimators) EXPECT_EQ(alpha_to_bias_bound(s, p, 0.0).value(), 0.0);
}

TEST(BiasBound, MonotoneAndBounded) {
    Rng rng(4);
    const auto s = GramSpectrum::from_design(gaussian_matrix(rng, 20, 5));
    for (auto p : kAllEstimators) {
        double prev = 0.0;
        for (double a = 1e-3; a < 1e4; a *= 1.5) {
            const double c = alpha_to_bias_bound(s, p, a).value();
            EXPECT_GE(c, prev);
            EXPECT_LE(c, identity_schatten_norm(p, 5));
            prev = c;
        }
    }
    EXPECT_THROW(BiasBound(-0.1), DomainError);
}

TEST(BiasBoundToAlpha, SaturatedBoundGivesInfinity) {
    const auto s = GramSpectrum::from_design(sqrt_diag_design());
    for (auto p : kAllEstimators) {
        EXPECT_TRUE(std::isinf(bias_bound_to_alpha(s, p, BiasBound(identity_schatten_norm(p, 10)))));
        EXPECT_TRUE(std::isinf(bias_bound_to_alpha(s, p, BiasBound(50.0))));
    }
}

TEST(BiasBoundToAlpha, SpectralInverse) {
    const auto s = GramSpectrum::from_design(sqrt_diag_design());
    EXPECT_NEAR(bias_bound_to_alpha(s, SchattenIndex::Spectral, BiasBound(0.5)), 1.0, 1e-11);
    EXPECT_NEAR(bias_bound_to_alpha(s, SchattenIndex::Spectral, BiasBound(0.8)), 4.0, 4e-11);
}

TEST(BiasBoundToAlpha, RoundTrip) {
    Rng rng(8);
    const auto s = GramSpectrum::from_design(gaussian_matrix(rng, 30, 6));
    for (auto p : kAllEstimators)
        for (double a : {0.01, 1.0, 100.0}) {
            // The nuclear bound is flat for alpha below the smallest eigenvalue.
            if (p == SchattenIndex::Nuclear && a <= s.eigvals.minCoeff()) continue;
            const double back = bias_bound_to_alpha(s, p, alpha_to_bias_bound(s, p, a));
            EXPECT_NEAR(back, a, 1e-9 * std::max(1.0, a)) << model_name(p) << " " << a;
        }
}

TEST(OperatorDiagnostics, ZeroOperator) {
    const MatrixXd X = sqrt_diag_design();
    for (auto p : kAllEstimators) {
        const auto diag = operator_diagnostics(LinearOperator{MatrixXd::Zero(10, 10)}, X, p);
        EXPECT_NEAR(diag.bias_norm, identity_schatten_norm(p, 10), 1e-12);
        EXPECT_EQ(diag.variance_trace, 0.0);
    }
}

TEST(OperatorDiagnostics, OlsIsUnbiasedAndSpectralHalves) {
    Rng rng(6);
    const MatrixXd X = gaussian_matrix(rng, 12, 4);
    const MatrixXd ols = (X.transpose() * X).inverse() * X.transpose();
    for (auto p : kAllEstimators) EXPECT_LT(operator_diagnostics({ols}, X, p).bias_norm, 1e-10);

    const MatrixXd F = sqrt_diag_design();
    const auto L = estimator_operator(F, SchattenIndex::Spectral, 1.0);
    EXPECT_NEAR(operator_diagnostics(L, F, SchattenIndex::Spectral).bias_norm, 0.5, 1e-12);
    EXPECT_THROW(operator_diagnostics({MatrixXd::Zero(3, 3)}, F, SchattenIndex::Spectral), DimensionMismatch);
}

TEST(Frontier, MonotoneAlongAlphaSweep) {
    const MatrixXd X = sqrt_diag_design();
    for (auto p : kAllEstimators) {
        double prev_bias = -1.0, prev_var = INFINITY;
        for (double a = 1e-2; a < 1e3; a *= 1.3) {
            const auto d = operator_diagnostics(estimator_operator(X, p, a), X, p);
            EXPECT_GE(d.bias_norm, prev_bias - 1e-12);
            EXPECT_LE(d.variance_trace, prev_var + 1e-12);
            prev_bias = d.bias_norm;
            prev_var = d.variance_trace;
        }
    }
}

// At equal p-bias, the estimator built for norm p has the least variance.
TEST(Frontier, EachEstimatorDominatesInItsOwnNorm) {
    const MatrixXd X = sqrt_diag_design();
    for (auto norm : kAllEstimators) {
        const double top = identity_schatten_norm(norm, 10);
        for (double frac : {0.1, 0.3, 0.5, 0.7, 0.9}) {
            const double C = frac * top;
            double var[3];
            for (auto p : kAllEstimators) {
                auto bias_of = [&](double a) {
                    return operator_diagnostics(estimator_operator(X, p, a), X, norm).bias_norm;
                };
                const double a = bisect(bias_of, C, 0.0, 1e8);
                var[static_cast<int>(p)] =
                    operator_diagnostics(estimator_operator(X, p, a), X, norm).variance_trace;
            }
            const double own = var[static_cast<int>(norm)];
            for (double v : var) EXPECT_LE(own, v * (1.0 + 1e-9)) << model_name(norm) << " C=" << C;
        }
    }
}

TEST(ModelNames, ParseAndPrint) {
    for (auto p : kAllEstimators) EXPECT_EQ(parse_model(model_name(p)), p);
    EXPECT_EQ(parse_model("frobenius"), SchattenIndex::Frobenius);
    EXPECT_EQ(parse_model("pinf"), SchattenIndex::Spectral);
    EXPECT_THROW(parse_model("lasso"), ConfigError);
}

}  // namespace
}  // namespace biasreg
