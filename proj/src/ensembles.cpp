#include "biasreg/ensembles.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include <Eigen/QR>

#include "biasreg/errors.hpp"

namespace biasreg {

namespace {

void require_sizes(Index n, Index d) {
    if (n < 1 || d < 1) throw InvalidConfig("n_obs and n_feat must be >= 1");
}

void require_nonnegative(double v, const char* name) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw InvalidConfig(std::string(name) + " must be >= 0");
}

}  // namespace

double NoiseDensity::sample(Rng& rng) const {
    if (half_width == 0.0) return 1.0;
    std::uniform_real_distribution<double> u(1.0 - half_width, 1.0 + half_width);
    return u(rng);
}

MatrixXd sample_stiefel(Index n, Index d, Rng& rng) {
    if (d > n) throw InvalidConfig("Stiefel frame needs d <= N");
    const MatrixXd z = gaussian_matrix(rng, n, d);
    Eigen::HouseholderQR<MatrixXd> qr(z);
    MatrixXd q = qr.householderQ() * MatrixXd::Identity(n, d);
    const MatrixXd& r = qr.matrixQR();
    for (Index j = 0; j < d; ++j)
        if (r(j, j) < 0.0) q.col(j) *= -1.0;
    return q;
}

Dataset sample_spherical(const SphericalGaussianConfig& c, Index n_test, std::uint64_t seed) {
    require_sizes(c.n_obs, c.n_feat);
    require_nonnegative(c.beta, "beta");
    require_nonnegative(c.sigma, "sigma");
    Rng rng(seed);
    const double entry_sd = 1.0 / std::sqrt(static_cast<double>(c.n_obs));
    Dataset ds;
    ds.seed = seed;
    ds.X_tr = gaussian_matrix(rng, c.n_obs, c.n_feat, entry_sd);
    ds.beta0 = gaussian_vector(rng, c.n_feat, c.beta);
    ds.Y_tr = ds.X_tr * ds.beta0 + gaussian_vector(rng, c.n_obs, c.sigma);
    ds.X_te = gaussian_matrix(rng, n_test, c.n_feat, entry_sd);
    ds.Y_te = ds.X_te * ds.beta0;
    return ds;
}

Dataset sample_diagonal(const DiagonalEnsembleConfig& c, std::uint64_t seed) {
    require_sizes(c.n_obs, c.n_feat);
    if (c.n_feat > c.n_obs) throw InvalidConfig("diagonal ensemble needs n_feat <= n_obs");
    require_nonnegative(c.beta, "beta");
    require_nonnegative(c.sigma, "sigma");
    if (!(c.noise_density.half_width >= 0.0 && c.noise_density.half_width < 1.0))
        throw InvalidConfig("noise half width must lie in [0, 1)");
    Rng rng(seed);
    const Index n = c.n_obs, d = c.n_feat;
    VectorXd spectrum(d), noise(d);
    for (Index i = 0; i < d; ++i) spectrum(i) = c.spectral_density.sample(rng);
    for (Index i = 0; i < d; ++i) noise(i) = c.noise_density.sample(rng);
    const MatrixXd frame_tr = sample_stiefel(n, d, rng);
    const MatrixXd frame_te = sample_stiefel(n, d, rng);

    Dataset ds;
    ds.seed = seed;
    ds.feature_scales = spectrum;
    ds.X_tr = frame_tr * spectrum.cwiseProduct(noise).cwiseSqrt().asDiagonal();
    ds.X_te = frame_te * spectrum.cwiseSqrt().asDiagonal();
    ds.beta0 = gaussian_vector(rng, d, c.beta);
    ds.Y_tr = ds.X_tr * ds.beta0 + gaussian_vector(rng, n, c.sigma);
    ds.Y_te = ds.X_te * ds.beta0;
    return ds;
}

Dataset sample_equicorrelated(const EquicorrelatedConfig& c, Index n_test, std::uint64_t seed) {
    require_sizes(c.n_obs, c.n_feat);
    if (!(c.rho >= 0.0 && c.rho < 1.0)) throw InvalidConfig("rho must lie in [0, 1)");
    require_nonnegative(c.sigma, "sigma");
    Rng rng(seed);
    const Index d = c.n_feat;
    // x = sqrt(1 - rho) z + sqrt(rho) w 1 has covariance (1 - rho) I + rho 1 1^T.
    auto draw_rows = [&](Index rows) {
        MatrixXd x = gaussian_matrix(rng, rows, d, std::sqrt(1.0 - c.rho));
        const VectorXd shared = gaussian_vector(rng, rows, std::sqrt(c.rho));
        x.colwise() += shared;
        return x;
    };

    Dataset ds;
    ds.seed = seed;
    ds.X_tr = draw_rows(c.n_obs);
    if (c.sparse) {
        const SparseSpec& s = *c.sparse;
        if (s.n_large < 0 || s.n_large > d) throw InvalidConfig("sparse n_large must lie in [0, d]");
        std::vector<Index> idx(static_cast<std::size_t>(d));
        std::iota(idx.begin(), idx.end(), Index{0});
        std::shuffle(idx.begin(), idx.end(), rng);
        ds.beta0 = gaussian_vector(rng, d, s.small_scale);
        const VectorXd large = gaussian_vector(rng, s.n_large);
        for (int k = 0; k < s.n_large; ++k) ds.beta0(idx[static_cast<std::size_t>(k)]) = large(k);
    } else {
        ds.beta0 = gaussian_vector(rng, d);
    }
    ds.Y_tr = ds.X_tr * ds.beta0 + gaussian_vector(rng, c.n_obs, c.sigma);
    ds.X_te = draw_rows(n_test);
    ds.Y_te = ds.X_te * ds.beta0;
    return ds;
}

Dataset sample_ensemble(const EnsembleSpec& spec, std::uint64_t seed) {
    return std::visit(
        [&](const auto& cfg) -> Dataset {
            using T = std::decay_t<decltype(cfg)>;
            if constexpr (std::is_same_v<T, SphericalGaussianConfig>)
                return sample_spherical(cfg, spec.n_test, seed);
            else if constexpr (std::is_same_v<T, DiagonalEnsembleConfig>)
                return sample_diagonal(cfg, seed);
            else
                return sample_equicorrelated(cfg, spec.n_test, seed);
        },
        spec.config);
}

double empirical_mse(const FittedModel& model, const Dataset& dataset) {
    if (dataset.X_te.rows() != dataset.Y_te.size())
        throw DimensionMismatch("test matrix and test targets disagree in length");
    const VectorXd residual = model.predict(dataset.X_te) - dataset.Y_te;
    if (residual.size() == 0) return 0.0;
    return residual.squaredNorm() / static_cast<double>(residual.size());
}

}  // namespace biasreg
