#pragma once

#include <cstdint>

#include "biasreg/ensembles.hpp"

namespace biasreg {

/// phi(x) = sqrt(2 / d_rbf) cos(W x + b), W rows ~ N(0, 2 bandwidth I),
/// b ~ Unif[0, 2 pi). <phi(x), phi(y)> approximates exp(-bandwidth |x - y|^2).
struct RFFMap {
    MatrixXd weights;  // d_rbf x d
    VectorXd offsets;  // d_rbf
    double bandwidth = 1.0;
    std::uint64_t seed = 0;

    /// Maps each row of `raw` (n x d) to feature space (n x d_rbf).
    MatrixXd transform(const MatrixXd& raw) const;
};

RFFMap sample_rff_map(Index d, Index d_rbf, double bandwidth, std::uint64_t seed);

/// f(x) = sum_k cos(2 pi k <x, v_k>) / k^2 with unit directions v_k.
struct NonlinearTarget {
    MatrixXd directions;  // terms x d, unit rows
};

NonlinearTarget sample_nonlinear_target(Index d, Index terms, Rng& rng);
double eval_target(const NonlinearTarget& target, const VectorXd& x);

struct RffDataset {
    Dataset features;  // X_tr / X_te in feature space, beta0 empty
    MatrixXd raw_train;
    MatrixXd raw_test;
    RFFMap map;
    NonlinearTarget target;
};

/// Raw inputs with iid N(0, 1/d_rbf) entries, the nonlinear target with d_rbf
/// terms, noisy training targets and noiseless test targets; both splits go
/// through the same feature map.
RffDataset make_rff_dataset(Index d, Index d_rbf, Index n_obs, Index n_test, double sigma,
                            double bandwidth, std::uint64_t seed);

}  // namespace biasreg
