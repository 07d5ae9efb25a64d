#include "biasreg/rff.hpp"

#include <cmath>
#include <numbers>

#include "biasreg/errors.hpp"

namespace biasreg {

MatrixXd RFFMap::transform(const MatrixXd& raw) const {
    if (raw.cols() != weights.cols())
        throw DimensionMismatch("raw inputs have " + std::to_string(raw.cols()) +
                                " columns, map expects " + std::to_string(weights.cols()));
    MatrixXd z = raw * weights.transpose();
    z.rowwise() += offsets.transpose();
    const double scale = std::sqrt(2.0 / static_cast<double>(weights.rows()));
    return (scale * z.array().cos()).matrix();
}

RFFMap sample_rff_map(Index d, Index d_rbf, double bandwidth, std::uint64_t seed) {
    if (d < 1 || d_rbf < 1) throw InvalidConfig("d and d_rbf must be >= 1");
    if (!(bandwidth > 0.0)) throw InvalidConfig("bandwidth must be > 0");
    Rng rng(seed);
    RFFMap map;
    map.bandwidth = bandwidth;
    map.seed = seed;
    map.weights = gaussian_matrix(rng, d_rbf, d, std::sqrt(2.0 * bandwidth));
    std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
    map.offsets.resize(d_rbf);
    for (Index k = 0; k < d_rbf; ++k) map.offsets(k) = phase(rng);
    return map;
}

NonlinearTarget sample_nonlinear_target(Index d, Index terms, Rng& rng) {
    NonlinearTarget t;
    t.directions = gaussian_matrix(rng, terms, d);
    for (Index k = 0; k < terms; ++k) {
        double norm = t.directions.row(k).norm();
        while (norm == 0.0) {
            t.directions.row(k) = gaussian_vector(rng, d).transpose();
            norm = t.directions.row(k).norm();
        }
        t.directions.row(k) /= norm;
    }
    return t;
}

double eval_target(const NonlinearTarget& target, const VectorXd& x) {
    if (x.size() != target.directions.cols())
        throw DimensionMismatch("input dimension does not match target directions");
    const VectorXd proj = target.directions * x;
    double f = 0.0;
    for (Index k = 0; k < proj.size(); ++k) {
        const double order = static_cast<double>(k + 1);
        f += std::cos(2.0 * std::numbers::pi * order * proj(k)) / (order * order);
    }
    return f;
}

RffDataset make_rff_dataset(Index d, Index d_rbf, Index n_obs, Index n_test, double sigma,
                            double bandwidth, std::uint64_t seed) {
    if (n_obs < 1 || n_test < 0) throw InvalidConfig("n_obs must be >= 1 and n_test >= 0");
    if (!(sigma >= 0.0)) throw InvalidConfig("sigma must be >= 0");
    RffDataset out;
    out.map = sample_rff_map(d, d_rbf, bandwidth, derive_seed(seed, 1));

    Rng rng(seed);
    const double entry_sd = 1.0 / std::sqrt(static_cast<double>(d_rbf));
    out.target = sample_nonlinear_target(d, d_rbf, rng);
    out.raw_train = gaussian_matrix(rng, n_obs, d, entry_sd);
    out.raw_test = gaussian_matrix(rng, n_test, d, entry_sd);

    Dataset& ds = out.features;
    ds.seed = seed;
    ds.X_tr = out.map.transform(out.raw_train);
    ds.X_te = out.map.transform(out.raw_test);
    ds.Y_tr.resize(n_obs);
    for (Index i = 0; i < n_obs; ++i) ds.Y_tr(i) = eval_target(out.target, out.raw_train.row(i).transpose());
    ds.Y_tr += gaussian_vector(rng, n_obs, sigma);
    ds.Y_te.resize(n_test);
    for (Index i = 0; i < n_test; ++i) ds.Y_te(i) = eval_target(out.target, out.raw_test.row(i).transpose());
    return out;
}

}  // namespace biasreg
