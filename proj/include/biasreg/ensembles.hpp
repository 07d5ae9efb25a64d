#pragma once

#include <cstdint>
#include <optional>
#include <variant>

#include "biasreg/estimator.hpp"
#include "biasreg/random.hpp"
#include "biasreg/spectral_density.hpp"

namespace biasreg {

/// X entries iid N(0, 1/N); beta0 ~ N(0, beta^2 I_d); Y = X beta0 + sigma eps.
struct SphericalGaussianConfig {
    Index n_obs = 100;
    Index n_feat = 50;
    double beta = 1.0;
    double sigma = 1.0;
};

/// Multiplicative spectrum noise with unit mean: a point mass at 1 when
/// half_width = 0, otherwise Uniform[1 - half_width, 1 + half_width].
struct NoiseDensity {
    double half_width = 0.0;
    double sample(Rng& rng) const;
};

/// X_tr = X1 diag(sqrt(l_i s_i)), X_te = X2 diag(sqrt(l_i)) with X1, X2
/// independent Haar frames on the Stiefel manifold, l_i ~ spectral density and
/// s_i ~ noise density.
struct DiagonalEnsembleConfig {
    Index n_obs = 100;
    Index n_feat = 50;
    SpectralDensity spectral_density = SpectralDensity::power_law(1.0);
    NoiseDensity noise_density{};
    double beta = 1.0;
    double sigma = 1.0;
};

/// beta0 has `n_large` coordinates drawn N(0, 1) and the rest N(0, small_scale^2).
struct SparseSpec {
    int n_large = 3;
    double small_scale = 0.1;
};

/// Rows iid N(0, (1 - rho) I + rho 1 1^T); beta0 ~ N(0, I) unless sparse.
struct EquicorrelatedConfig {
    Index n_obs = 100;
    Index n_feat = 50;
    double rho = 0.0;
    double sigma = 1.0;
    std::optional<SparseSpec> sparse;
};

/// Training and (noiseless) test data drawn from one ensemble.
struct Dataset {
    MatrixXd X_tr;
    VectorXd Y_tr;
    MatrixXd X_te;
    VectorXd Y_te;
    VectorXd beta0;           // empty when there is no linear ground truth
    VectorXd feature_scales;  // diagonal ensemble: the sampled spectrum l_i
    std::uint64_t seed = 0;
};

inline constexpr Index kDefaultTestSize = 5000;

/// Haar-distributed N x d matrix with orthonormal columns (QR of a Gaussian
/// matrix with the sign of R's diagonal folded into Q).
MatrixXd sample_stiefel(Index n, Index d, Rng& rng);

Dataset sample_spherical(const SphericalGaussianConfig& config, Index n_test, std::uint64_t seed);
Dataset sample_diagonal(const DiagonalEnsembleConfig& config, std::uint64_t seed);
Dataset sample_equicorrelated(const EquicorrelatedConfig& config, Index n_test, std::uint64_t seed);

using EnsembleConfig =
    std::variant<SphericalGaussianConfig, DiagonalEnsembleConfig, EquicorrelatedConfig>;

struct EnsembleSpec {
    EnsembleConfig config = SphericalGaussianConfig{};
    Index n_test = kDefaultTestSize;  // ignored by the diagonal ensemble (M = N)
};

Dataset sample_ensemble(const EnsembleSpec& spec, std::uint64_t seed);

/// Mean squared error of the model's predictions against the noiseless test
/// targets.
double empirical_mse(const FittedModel& model, const Dataset& dataset);

}  // namespace biasreg
