#pragma once

#include <cstdint>

#include "biasreg/estimator.hpp"

namespace biasreg {

/// Euclidean projection of a nonnegative vector onto {v : sum(v) <= radius}.
VectorXd project_l1_ball(const VectorXd& v, double radius);

/// Frobenius-nearest matrix with Schatten-p norm at most `radius`:
/// singular-value l1 projection (p=1), rescaling (p=2) or clipping (p=inf).
MatrixXd project_schatten_ball(const MatrixXd& M, SchattenIndex p, double radius);

struct NumericOracleOptions {
    int max_iter = 50000;
    double tol = 1e-10;
    int restarts = 5;
    std::uint64_t seed = 0x5EEDULL;
};

struct NumericSolution {
    LinearOperator op;
    double objective = 0.0;       // Tr(L L^T) / 2 of the returned operator
    double bias_norm = 0.0;       // ||L X - I||_p of the returned operator
    int iterations = 0;           // of the best restart
    double restart_spread = 0.0;  // (max - min) objective across restarts, relative
};

/// Directly minimizes Tr(L L^T)/2 subject to ||L X - I||_p <= C with ADMM on
/// the splitting B = L X - I, B in the Schatten-p ball. Does not use any of
/// the closed-form estimator machinery; it exists to check it.
///
/// Desk scale only: N <= 32, d <= 8. Throws DidNotConverge if a restart's
/// residuals or relative objective change are still above `tol` after
/// `max_iter` iterations.
NumericSolution solve_bias_constrained_numeric(const MatrixXd& X, BiasBound bound,
                                               SchattenIndex p,
                                               const NumericOracleOptions& options = {});

}  // namespace biasreg
