#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "biasreg/rff.hpp"

namespace biasreg {
namespace {

TEST(RffMap, DeterministicAndBounded) {
    const RFFMap a = sample_rff_map(5, 64, 1.0, 9);
    const RFFMap b = sample_rff_map(5, 64, 1.0, 9);
    EXPECT_EQ(a.weights, b.weights);
    EXPECT_EQ(a.offsets, b.offsets);
    Rng rng(1);
    const MatrixXd X = gaussian_matrix(rng, 10, 5);
    const MatrixXd F = a.transform(X);
    EXPECT_EQ(F, a.transform(X));
    EXPECT_LE(F.cwiseAbs().maxCoeff(), std::sqrt(2.0 / 64) + 1e-15);
    EXPECT_GE(a.offsets.minCoeff(), 0.0);
    EXPECT_LT(a.offsets.maxCoeff(), 2.0 * std::numbers::pi);
}

TEST(RffMap, ApproximatesGaussianKernel) {
    const double bandwidth = 0.7;
    const RFFMap map = sample_rff_map(3, 4096, bandwidth, 4);
    Rng rng(2);
    const MatrixXd X = gaussian_matrix(rng, 6, 3, 0.6);
    const MatrixXd F = map.transform(X);
    for (Index i = 0; i < 6; ++i)
        for (Index j = 0; j < 6; ++j) {
            const double exact = std::exp(-bandwidth * (X.row(i) - X.row(j)).squaredNorm());
            EXPECT_NEAR(F.row(i).dot(F.row(j)), exact, 3.0 / std::sqrt(4096.0));
        }
}

TEST(NonlinearTarget, ValuesAndBounds) {
    Rng rng(3);
    const NonlinearTarget t = sample_nonlinear_target(4, 25, rng);
    for (Index k = 0; k < 25; ++k) EXPECT_NEAR(t.directions.row(k).norm(), 1.0, 1e-12);
    double basel = 0.0;
    for (int k = 1; k <= 25; ++k) basel += 1.0 / (k * k);
    EXPECT_NEAR(eval_target(t, VectorXd::Zero(4)), basel, 1e-14);
    for (int r = 0; r < 100; ++r) EXPECT_LE(std::abs(eval_target(t, gaussian_vector(rng, 4, 3.0))), basel + 1e-12);

    const NonlinearTarget one = sample_nonlinear_target(4, 1, rng);
    const VectorXd x = gaussian_vector(rng, 4);
    EXPECT_NEAR(eval_target(one, x), std::cos(2.0 * std::numbers::pi * one.directions.row(0).dot(x)), 1e-14);
}

TEST(NonlinearTarget, DirectionsCentred) {
    Rng rng(4);
    const NonlinearTarget t = sample_nonlinear_target(3, 20000, rng);
    const VectorXd mean = t.directions.colwise().mean();
    // Each coordinate of a uniform unit vector in R^3 has variance 1/3.
    EXPECT_LT(mean.cwiseAbs().maxCoeff(), 3.0 * std::sqrt(1.0 / 3.0 / 20000.0));
}

TEST(RffDataset, NoiselessTargetsAndSharedMap) {
    const RffDataset ds = make_rff_dataset(4, 50, 30, 20, 0.0, 1.0, 7);
    for (Index i = 0; i < 30; ++i)
        EXPECT_DOUBLE_EQ(ds.features.Y_tr(i), eval_target(ds.target, ds.raw_train.row(i).transpose()));
    EXPECT_EQ(ds.features.X_tr, ds.map.transform(ds.raw_train));
    EXPECT_EQ(ds.features.X_te, ds.map.transform(ds.raw_test));
    EXPECT_EQ(ds.features.beta0.size(), 0);
    EXPECT_EQ(ds.features.X_tr.cols(), 50);
}

TEST(RffDataset, NoisyTrainNoiselessTest) {
    const RffDataset ds = make_rff_dataset(4, 50, 30, 20, 1.0, 1.0, 7);
    double diff = 0.0;
    for (Index i = 0; i < 30; ++i)
        diff += std::abs(ds.features.Y_tr(i) - eval_target(ds.target, ds.raw_train.row(i).transpose()));
    EXPECT_GT(diff, 1.0);
    for (Index i = 0; i < 20; ++i)
        EXPECT_DOUBLE_EQ(ds.features.Y_te(i), eval_target(ds.target, ds.raw_test.row(i).transpose()));
}

TEST(RffDataset, SeedDeterminismAndRawVariance) {
    const RffDataset a = make_rff_dataset(10, 200, 100, 2000, 1.0, 1.0, 11);
    const RffDataset b = make_rff_dataset(10, 200, 100, 2000, 1.0, 1.0, 11);
    EXPECT_EQ(a.features.X_tr, b.features.X_tr);
    EXPECT_EQ(a.features.Y_tr, b.features.Y_tr);
    const Eigen::ArrayXd sq = a.raw_test.array().square().reshaped();
    const double n = static_cast<double>(sq.size());
    const double mean = sq.mean();
    const double se = std::sqrt((sq - mean).square().sum() / (n - 1.0) / n);
    EXPECT_LT(std::abs(mean - 1.0 / 200.0), 3.0 * se);
}

}  // namespace
}  // namespace biasreg
