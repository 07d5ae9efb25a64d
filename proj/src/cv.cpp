#include "biasreg/cv.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "biasreg/errors.hpp"
#include "biasreg/random.hpp"
#include "biasreg/rff.hpp"
#include "biasreg/theory.hpp"

namespace biasreg {

void AlphaGrid::validate() const {
    if (count < 1) throw ConfigError("alpha grid needs count >= 1");
    if (count == 1) {
        if (lo != hi || !(lo >= 0.0) || !std::isfinite(lo))
            throw ConfigError("single-point alpha grid needs lo == hi >= 0");
        return;
    }
    if (!(lo > 0.0) || !(hi > lo) || !std::isfinite(hi))
        throw ConfigError("alpha grid needs 0 < lo < hi");
}

std::vector<double> AlphaGrid::values() const {
    validate();
    return log_grid(lo, hi, count);
}

void CVConfig::validate() const {
    if (folds < 2) throw ConfigError("folds must be >= 2");
    if (n_datasets < 1) throw ConfigError("n_datasets must be >= 1");
    if (models.empty()) throw ConfigError("at least one model is required");
    grid.validate();
}

std::vector<std::vector<Index>> kfold_partition(Index n, int folds, std::uint64_t seed) {
    if (folds < 2) throw ConfigError("folds must be >= 2");
    if (n < folds)
        throw InsufficientData("need at least " + std::to_string(folds) + " rows, got " +
                               std::to_string(n));
    std::vector<Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Index{0});
    Rng rng(seed);
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<std::vector<Index>> out(static_cast<std::size_t>(folds));
    const Index base = n / folds, extra = n % folds;
    Index cursor = 0;
    for (int f = 0; f < folds; ++f) {
        const Index size = base + (f < extra ? 1 : 0);
        out[static_cast<std::size_t>(f)].assign(order.begin() + cursor, order.begin() + cursor + size);
        cursor += size;
    }
    return out;
}

std::vector<std::vector<double>> kfold_scores(const MatrixXd& X, const VectorXd& Y,
                                              const std::vector<SchattenIndex>& models,
                                              const std::vector<double>& alphas, int folds,
                                              std::uint64_t fold_seed, FitOptions options) {
    if (X.rows() != Y.size()) throw DimensionMismatch("X and Y disagree in row count");
    const auto partition = kfold_partition(X.rows(), folds, fold_seed);
    std::vector<std::vector<double>> scores(models.size(), std::vector<double>(alphas.size(), 0.0));

    std::vector<char> held_out(static_cast<std::size_t>(X.rows()));
    for (const auto& fold : partition) {
        std::fill(held_out.begin(), held_out.end(), 0);
        for (Index i : fold) held_out[static_cast<std::size_t>(i)] = 1;
        std::vector<Index> train;
        train.reserve(static_cast<std::size_t>(X.rows()) - fold.size());
        for (Index i = 0; i < X.rows(); ++i)
            if (!held_out[static_cast<std::size_t>(i)]) train.push_back(i);

        const MatrixXd X_fit = X(train, Eigen::all);
        const VectorXd Y_fit = Y(train);
        const MatrixXd X_val = X(fold, Eigen::all);
        const VectorXd Y_val = Y(fold);
        const SpectralFitter fitter(X_fit, Y_fit);
        for (std::size_t m = 0; m < models.size(); ++m) {
            for (std::size_t a = 0; a < alphas.size(); ++a) {
                const VectorXd beta = fitter.coefficients(models[m], alphas[a], options);
                const double mse = (X_val * beta - Y_val).squaredNorm() / static_cast<double>(fold.size());
                scores[m][a] += mse / static_cast<double>(partition.size());
            }
        }
    }
    return scores;
}

namespace {

double argmin_alpha(const std::vector<double>& alphas, const std::vector<double>& scores) {
    std::size_t best = 0;
    for (std::size_t a = 1; a < alphas.size(); ++a) {
        if (scores[a] < scores[best] || (scores[a] == scores[best] && alphas[a] < alphas[best]))
            best = a;
    }
    return alphas[best];
}

bool name_before(SchattenIndex a, SchattenIndex b) { return model_name(a) < model_name(b); }

}  // namespace

double kfold_select_alpha(const MatrixXd& X, const VectorXd& Y, SchattenIndex p, const CVConfig& cfg) {
    if (cfg.folds < 2) throw ConfigError("folds must be >= 2");
    const std::vector<double> alphas = cfg.grid.values();
    const auto scores = kfold_scores(X, Y, {p}, alphas, cfg.folds, cfg.seed, cfg.fit_options);
    return argmin_alpha(alphas, scores.front());
}

DatasetOutcome evaluate_dataset(const Dataset& dataset, const CVConfig& cfg, std::uint64_t fold_seed) {
    const std::vector<double> alphas = cfg.grid.values();
    const auto scores =
        kfold_scores(dataset.X_tr, dataset.Y_tr, cfg.models, alphas, cfg.folds, fold_seed, cfg.fit_options);
    const SpectralFitter full(dataset.X_tr, dataset.Y_tr);
    DatasetOutcome out;
    for (std::size_t m = 0; m < cfg.models.size(); ++m) {
        const double alpha = argmin_alpha(alphas, scores[m]);
        out.alphas.push_back(alpha);
        out.mse.push_back(empirical_mse(full.fit(cfg.models[m], alpha, cfg.fit_options), dataset));
    }
    return out;
}

std::size_t BenchReport::index_of(SchattenIndex p) const {
    for (std::size_t m = 0; m < models.size(); ++m)
        if (models[m] == p) return m;
    throw DomainError("model '" + std::string(model_name(p)) + "' is not in the report");
}

void summarize(BenchReport& r) {
    const std::size_t n_models = r.models.size();
    if (n_models == 0 || r.mse.size() != n_models) throw DomainError("report has no models");
    r.n_datasets = static_cast<int>(r.mse.front().size());
    if (r.n_datasets == 0) throw DomainError("report has no datasets");
    const double n = static_cast<double>(r.n_datasets);

    r.avg_error.assign(n_models, 0.0);
    r.std_error.assign(n_models, 0.0);
    r.win_count.assign(n_models, 0);
    for (std::size_t m = 0; m < n_models; ++m) {
        const auto& row = r.mse[m];
        const double mean = std::accumulate(row.begin(), row.end(), 0.0) / n;
        double ss = 0.0;
        for (double v : row) ss += (v - mean) * (v - mean);
        r.avg_error[m] = mean;
        r.std_error[m] = r.n_datasets > 1 ? std::sqrt(ss / (n - 1.0) / n) : 0.0;
    }
    for (int j = 0; j < r.n_datasets; ++j) {
        std::size_t winner = 0;
        for (std::size_t m = 1; m < n_models; ++m) {
            const double a = r.mse[m][static_cast<std::size_t>(j)];
            const double b = r.mse[winner][static_cast<std::size_t>(j)];
            if (a < b || (a == b && name_before(r.models[m], r.models[winner]))) winner = m;
        }
        ++r.win_count[winner];
    }
    r.win_prob.resize(n_models);
    for (std::size_t m = 0; m < n_models; ++m) r.win_prob[m] = r.win_count[m] / n;

    r.ratio_to_ridge.clear();
    const auto ridge = std::find(r.models.begin(), r.models.end(), SchattenIndex::Frobenius);
    if (ridge != r.models.end()) {
        const double base = r.avg_error[static_cast<std::size_t>(ridge - r.models.begin())];
        for (double v : r.avg_error) r.ratio_to_ridge.push_back(v / base);
    }
    std::tie(r.best_avg, r.best_mode) = aggregate_wins(r);
}

std::pair<SchattenIndex, SchattenIndex> aggregate_wins(const BenchReport& r) {
    if (r.models.empty() || r.avg_error.size() != r.models.size() ||
        r.win_count.size() != r.models.size())
        throw DomainError("report is empty or not summarized");
    std::size_t best_avg = 0, best_mode = 0;
    for (std::size_t m = 1; m < r.models.size(); ++m) {
        if (r.avg_error[m] < r.avg_error[best_avg] ||
            (r.avg_error[m] == r.avg_error[best_avg] && name_before(r.models[m], r.models[best_avg])))
            best_avg = m;
        if (r.win_count[m] > r.win_count[best_mode] ||
            (r.win_count[m] == r.win_count[best_mode] && name_before(r.models[m], r.models[best_mode])))
            best_mode = m;
    }
    return {r.models[best_avg], r.models[best_mode]};
}

namespace {

template <class MakeDataset>
BenchReport collect(const CVConfig& cfg, int n_datasets, MakeDataset&& make) {
    cfg.validate();
    BenchReport report;
    report.models = cfg.models;
    report.mse.assign(cfg.models.size(), {});
    report.selected_alphas.assign(cfg.models.size(), {});
    for (int j = 0; j < n_datasets; ++j) {
        const auto idx = static_cast<std::uint64_t>(j);
        const Dataset ds = make(derive_seed(cfg.seed, 2 * idx), j);
        const DatasetOutcome out = evaluate_dataset(ds, cfg, derive_seed(cfg.seed, 2 * idx + 1));
        for (std::size_t m = 0; m < cfg.models.size(); ++m) {
            report.mse[m].push_back(out.mse[m]);
            report.selected_alphas[m].push_back(out.alphas[m]);
        }
    }
    summarize(report);
    report.metadata["folds"] = std::to_string(cfg.folds);
    report.metadata["seed"] = std::to_string(cfg.seed);
    report.metadata["grid_count"] = std::to_string(cfg.grid.count);
    return report;
}

}  // namespace

BenchReport run_benchmark(const EnsembleSpec& ensemble, const CVConfig& cfg) {
    return collect(cfg, cfg.n_datasets,
                   [&](std::uint64_t seed, int) { return sample_ensemble(ensemble, seed); });
}

BenchReport rff_benchmark(const RffBenchConfig& rff, const CVConfig& cfg) {
    BenchReport report = collect(cfg, cfg.n_datasets, [&](std::uint64_t seed, int) {
        return make_rff_dataset(rff.d, rff.d_rbf, rff.n_obs, rff.n_test, rff.sigma, rff.bandwidth, seed)
            .features;
    });
    report.metadata["rff_bandwidth"] = std::to_string(rff.bandwidth);
    report.metadata["d_rbf"] = std::to_string(rff.d_rbf);
    return report;
}

BenchReport real_data_benchmark(const MatrixXd& X, const VectorXd& y, const RealDataSplitSpec& split,
                                const CVConfig& cfg) {
    if (X.rows() != y.size()) throw DimensionMismatch("feature rows and target length differ");
    if (split.train_size < cfg.folds || split.train_size >= X.rows())
        throw InsufficientData("train_size must lie in [folds, rows)");
    if (split.n_splits < 1) throw ConfigError("n_splits must be >= 1");

    const Index n = X.rows();
    BenchReport report = collect(cfg, split.n_splits, [&](std::uint64_t seed, int) {
        std::vector<Index> order(static_cast<std::size_t>(n));
        std::iota(order.begin(), order.end(), Index{0});
        Rng rng(seed);
        std::shuffle(order.begin(), order.end(), rng);
        const std::vector<Index> train(order.begin(), order.begin() + split.train_size);
        const std::vector<Index> test(order.begin() + split.train_size, order.end());

        MatrixXd X_tr = X(train, Eigen::all);
        MatrixXd X_te = X(test, Eigen::all);
        const Eigen::RowVectorXd mean = X_tr.colwise().mean();
        Eigen::RowVectorXd scale =
            ((X_tr.rowwise() - mean).colwise().squaredNorm() / static_cast<double>(train.size())).cwiseSqrt();
        for (Index j = 0; j < scale.size(); ++j)
            if (!(scale(j) > 0.0)) scale(j) = 1.0;
        X_tr = (X_tr.rowwise() - mean).array().rowwise() / scale.array();
        X_te = (X_te.rowwise() - mean).array().rowwise() / scale.array();

        const double y_mean = y(train).mean();
        Dataset ds;
        ds.seed = seed;
        ds.X_tr = std::move(X_tr);
        ds.X_te = std::move(X_te);
        ds.Y_tr = y(train).array() - y_mean;
        ds.Y_te = y(test).array() - y_mean;
        return ds;
    });
    report.metadata["feature_scaling"] = "zscore_train_split";
    report.metadata["target_centering"] = "train_mean";
    report.metadata["train_size"] = std::to_string(split.train_size);
    report.metadata["n_splits"] = std::to_string(split.n_splits);
    return report;
}

}  // namespace biasreg
