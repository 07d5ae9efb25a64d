#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "biasreg/ensembles.hpp"
#include "biasreg/estimator.hpp"

namespace biasreg {

/// Log-spaced regularization grid. count = 1 requires lo == hi and yields
/// that single value.
struct AlphaGrid {
    double lo = 1e-4;
    double hi = 1e6;
    int count = 9;

    void validate() const;
    std::vector<double> values() const;
};

struct CVConfig {
    int folds = 3;
    AlphaGrid grid{};
    std::vector<SchattenIndex> models{SchattenIndex::Nuclear, SchattenIndex::Frobenius,
                                      SchattenIndex::Spectral};
    int n_datasets = 100;
    std::uint64_t seed = 0;
    FitOptions fit_options{};

    void validate() const;
};

/// Seeded shuffle of 0..n-1 cut into `folds` contiguous blocks whose sizes
/// differ by at most one.
std::vector<std::vector<Index>> kfold_partition(Index n, int folds, std::uint64_t seed);

/// Mean validation MSE of every grid value, for each requested model. Fold
/// spectra are shared between models. Result is [model][alpha].
std::vector<std::vector<double>> kfold_scores(const MatrixXd& X, const VectorXd& Y,
                                              const std::vector<SchattenIndex>& models,
                                              const std::vector<double>& alphas, int folds,
                                              std::uint64_t fold_seed, FitOptions options = {});

/// Grid value with the lowest mean validation MSE; ties go to the smaller
/// alpha. Folds are drawn from cfg.seed. Throws InsufficientData if N < folds.
double kfold_select_alpha(const MatrixXd& X, const VectorXd& Y, SchattenIndex p,
                          const CVConfig& cfg);

/// CV-select, refit on all training rows and score on the test split, for
/// every model in cfg.models.
struct DatasetOutcome {
    std::vector<double> mse;
    std::vector<double> alphas;
};

DatasetOutcome evaluate_dataset(const Dataset& dataset, const CVConfig& cfg,
                                std::uint64_t fold_seed);

/// Per-(model, dataset) test errors and the summary statistics built from them.
struct BenchReport {
    std::vector<SchattenIndex> models;
    std::vector<std::vector<double>> mse;              // [model][dataset]
    std::vector<std::vector<double>> selected_alphas;  // [model][dataset]
    std::vector<double> avg_error;
    std::vector<double> std_error;  // standard error of avg_error
    std::vector<int> win_count;
    std::vector<double> win_prob;
    std::vector<double> ratio_to_ridge;  // avg_error / ridge avg_error; empty without ridge
    SchattenIndex best_avg = SchattenIndex::Frobenius;
    SchattenIndex best_mode = SchattenIndex::Frobenius;
    int n_datasets = 0;
    std::map<std::string, std::string> metadata;

    std::size_t index_of(SchattenIndex p) const;
};

/// Fills every aggregate from the mse / selected_alphas matrices. Per-dataset
/// winners are the strictly lowest MSE, ties going to the lexicographically
/// first model name.
void summarize(BenchReport& report);

/// (argmin of average error, most frequent per-dataset winner); ties go to the
/// lexicographically first model name.
std::pair<SchattenIndex, SchattenIndex> aggregate_wins(const BenchReport& report);

/// Replicate datasets j = 0..n-1 use seeds derived from (cfg.seed, j), so the
/// same master seed reproduces the same datasets under any grid or model list.
BenchReport run_benchmark(const EnsembleSpec& ensemble, const CVConfig& cfg);

struct RffBenchConfig {
    Index d = 10;
    Index d_rbf = 200;
    Index n_obs = 100;
    Index n_test = kDefaultTestSize;
    double sigma = 1.0;
    double bandwidth = 1.0;
};

BenchReport rff_benchmark(const RffBenchConfig& rff, const CVConfig& cfg);

struct RealDataSplitSpec {
    Index train_size = 300;
    int n_splits = 200;
};

/// Random train/test splits of a real dataset. Features are z-scored with
/// train-split statistics; the target is centred on the train mean (an
/// intercept), which leaves test MSE unchanged by the shift. cfg.n_datasets is
/// ignored in favour of split.n_splits.
BenchReport real_data_benchmark(const MatrixXd& X, const VectorXd& y, const RealDataSplitSpec& split,
                                const CVConfig& cfg);

}  // namespace biasreg
