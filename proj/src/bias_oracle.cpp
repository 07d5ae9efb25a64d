#include "biasreg/bias_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include <Eigen/SVD>

#include "biasreg/errors.hpp"
#include "biasreg/random.hpp"

namespace biasreg {

VectorXd project_l1_ball(const VectorXd& v, double radius) {
    if (v.sum() <= radius) return v;
    if (radius <= 0.0) return VectorXd::Zero(v.size());
    std::vector<double> sorted(v.data(), v.data() + v.size());
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    double cumulative = 0.0;
    double theta = 0.0;
    for (std::size_t j = 0; j < sorted.size(); ++j) {
        cumulative += sorted[j];
        const double candidate = (cumulative - radius) / static_cast<double>(j + 1);
        if (sorted[j] - candidate > 0.0) theta = candidate;
    }
    return (v.array() - theta).cwiseMax(0.0).matrix();
}

MatrixXd project_schatten_ball(const MatrixXd& M, SchattenIndex p, double radius) {
    Eigen::JacobiSVD<MatrixXd> svd(M, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const VectorXd s = svd.singularValues();
    VectorXd projected;
    switch (p) {
        case SchattenIndex::Nuclear:
            projected = project_l1_ball(s, radius);
            break;
        case SchattenIndex::Frobenius: {
            const double norm = s.norm();
            projected = norm <= radius ? s : VectorXd(s * (radius / norm));
            break;
        }
        case SchattenIndex::Spectral:
            projected = s.cwiseMin(radius);
            break;
    }
    return svd.matrixU() * projected.asDiagonal() * svd.matrixV().transpose();
}

namespace {

struct AdmmRun {
    MatrixXd L;
    double objective = 0.0;
    int iterations = 0;
    bool converged = false;
};

// Scaled-form ADMM with residual balancing for
//   min 1/2 ||L||_F^2  s.t.  L X - I = B,  ||B||_p <= C.
AdmmRun run_admm(const MatrixXd& X, double radius, SchattenIndex p,
                 const NumericOracleOptions& options, Rng& rng) {
    const Index d = X.cols();
    const MatrixXd identity = MatrixXd::Identity(d, d);
    const MatrixXd gram = X.transpose() * X;

    MatrixXd B = project_schatten_ball(gaussian_matrix(rng, d, d), p, radius);
    MatrixXd W = gaussian_matrix(rng, d, d, 0.1);
    double rho = static_cast<double>(d) / std::max(gram.trace(), 1e-12);

    auto factor = (identity + rho * gram).ldlt();
    AdmmRun run;
    double previous_objective = std::numeric_limits<double>::infinity();
    for (int it = 1; it <= options.max_iter; ++it) {
        // L (I + rho X X^T) = rho (I + B - W) X^T, solved via the d x d system.
        const MatrixXd rhs = (identity + B - W).transpose();
        const MatrixXd L = rho * factor.solve(rhs).transpose() * X.transpose();
        const MatrixXd LX = L * X;
        const MatrixXd B_next = project_schatten_ball(LX - identity + W, p, radius);
        const MatrixXd primal = LX - identity - B_next;
        W += primal;

        const double r = primal.norm();
        const double s = rho * ((B_next - B) * X.transpose()).norm();
        B = B_next;

        const double objective = 0.5 * L.squaredNorm();
        const double scale = std::max(1.0, L.norm());
        const double change =
            std::abs(objective - previous_objective) / std::max(objective, 1e-300);
        previous_objective = objective;
        run.L = L;
        run.objective = objective;
        run.iterations = it;
        if (r <= options.tol * scale && s <= options.tol * scale && change <= options.tol) {
            run.converged = true;
            break;
        }
        if (it % 10 == 0) {
            double factor_change = 1.0;
            if (r > 10.0 * s) factor_change = 2.0;
            else if (s > 10.0 * r) factor_change = 0.5;
            if (factor_change != 1.0) {
                rho *= factor_change;
                W /= factor_change;
                factor = (identity + rho * gram).ldlt();
            }
        }
    }
    return run;
}

}  // namespace

NumericSolution solve_bias_constrained_numeric(const MatrixXd& X, BiasBound bound,
                                               SchattenIndex p,
                                               const NumericOracleOptions& options) {
    if (X.rows() > 32 || X.cols() > 8)
        throw DomainError("numeric oracle is limited to N <= 32, d <= 8");
    if (!X.allFinite()) throw NonFinite("design matrix contains NaN or Inf");
    if (options.restarts < 1 || options.max_iter < 1)
        throw DomainError("restarts and max_iter must be positive");

    const Index d = X.cols();
    const Index n = X.rows();
    const double radius = bound.value();

    NumericSolution out;
    // B = -I is feasible: the unconstrained minimizer L = 0 is admissible.
    if (radius >= identity_schatten_norm(p, d)) {
        out.op.entries = MatrixXd::Zero(d, n);
        out.bias_norm = identity_schatten_norm(p, d);
        return out;
    }

    Rng rng(options.seed);
    double best = std::numeric_limits<double>::infinity();
    double worst = -best;
    for (int restart = 0; restart < options.restarts; ++restart) {
        AdmmRun run = run_admm(X, radius, p, options, rng);
        if (!run.converged)
            throw DidNotConverge("ADMM restart " + std::to_string(restart) + " did not reach tol " +
                                 std::to_string(options.tol) + " in " +
                                 std::to_string(options.max_iter) + " iterations");
        worst = std::max(worst, run.objective);
        if (run.objective < best) {
            best = run.objective;
            out.op.entries = run.L;
            out.objective = run.objective;
            out.iterations = run.iterations;
        }
    }
    out.restart_spread = (worst - best) / std::max(best, 1e-300);
    out.bias_norm = operator_diagnostics(out.op, X, p).bias_norm;
    return out;
}

}  // namespace biasreg
