#include "biasreg/commands.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "biasreg/errors.hpp"
#include "biasreg/random.hpp"

namespace biasreg {

using nlohmann::json;

std::string_view command_name(CommandKind kind) {
    switch (kind) {
        case CommandKind::TheoryCurve: return "theory-curve";
        case CommandKind::Simulate: return "simulate";
        case CommandKind::CvBench: return "cv-bench";
        case CommandKind::RffBench: return "rff-bench";
        case CommandKind::Basin: return "basin";
        case CommandKind::RealData: return "real-data";
    }
    return "unknown";
}

CommandKind parse_command(std::string_view name) {
    for (auto k : {CommandKind::TheoryCurve, CommandKind::Simulate, CommandKind::CvBench,
                   CommandKind::RffBench, CommandKind::Basin, CommandKind::RealData})
        if (command_name(k) == name) return k;
    throw ConfigError("unknown command '" + std::string(name) + "'");
}

OutputFormat parse_format(std::string_view name) {
    if (name == "csv") return OutputFormat::Csv;
    if (name == "json") return OutputFormat::Json;
    throw ConfigError("format must be csv or json, got '" + std::string(name) + "'");
}

namespace {

// Typed access to a JSON object that remembers which keys were read, so that
// anything left over can be reported as unknown.
class Keys {
public:
    Keys(const json& obj, std::string scope) : obj_(obj), scope_(std::move(scope)) {
        if (!obj_.is_object()) throw ConfigError(scope_ + " must be a JSON object");
    }

    template <class T>
    T get(const std::string& key, T fallback) {
        used_.insert(key);
        if (!obj_.contains(key)) return fallback;
        try {
            return obj_.at(key).get<T>();
        } catch (const json::exception& e) {
            throw ConfigError(scope_ + "." + key + " has the wrong type: " + e.what());
        }
    }

    template <class T>
    T require(const std::string& key) {
        if (!obj_.contains(key)) throw ConfigError(scope_ + "." + key + " is required");
        return get<T>(key, T{});
    }

    const json* child(const std::string& key) {
        used_.insert(key);
        return obj_.contains(key) ? &obj_.at(key) : nullptr;
    }

    bool has(const std::string& key) const { return obj_.contains(key); }

    void finish() const {
        for (const auto& [key, value] : obj_.items())
            if (!used_.count(key)) throw ConfigError("unknown key '" + key + "' in " + scope_);
    }

private:
    const json& obj_;
    std::string scope_;
    std::set<std::string> used_;
};

std::vector<SchattenIndex> read_models(Keys& keys, std::vector<SchattenIndex> fallback) {
    const json* node = keys.child("models");
    if (!node) return fallback;
    if (!node->is_array()) throw ConfigError("models must be an array of names");
    std::vector<SchattenIndex> out;
    for (const auto& item : *node) {
        if (!item.is_string()) throw ConfigError("models must be an array of names");
        const SchattenIndex p = parse_model(item.get<std::string>());
        for (auto q : out)
            if (q == p) throw ConfigError("model listed twice: " + item.get<std::string>());
        out.push_back(p);
    }
    if (out.empty()) throw ConfigError("models must not be empty");
    return out;
}

AlphaGrid read_grid(Keys& keys, AlphaGrid grid) {
    if (const json* node = keys.child("grid")) {
        Keys g(*node, "grid");
        grid.lo = g.get("lo", grid.lo);
        grid.hi = g.get("hi", grid.hi);
        grid.count = g.get("count", grid.count);
        g.finish();
    }
    grid.validate();
    return grid;
}

// Either an explicit "alphas" list or a log "grid".
std::vector<double> read_alphas(Keys& keys, AlphaGrid fallback) {
    if (keys.has("alphas")) {
        if (keys.has("grid")) throw ConfigError("give either alphas or grid, not both");
        const auto alphas = keys.get<std::vector<double>>("alphas", {});
        if (alphas.empty()) throw ConfigError("alpha grid is empty");
        for (double a : alphas)
            if (!(a >= 0.0) || !std::isfinite(a)) throw ConfigError("alphas must be finite and >= 0");
        keys.child("grid");
        return alphas;
    }
    keys.child("alphas");
    return read_grid(keys, fallback).values();
}

TheoryMethod read_method(Keys& keys) {
    const auto name = keys.get<std::string>("method", "quadrature");
    if (name == "quadrature") return TheoryMethod::Quadrature;
    if (name == "closed") return TheoryMethod::Closed;
    throw ConfigError("method must be quadrature or closed");
}

CVConfig read_cv(Keys& keys, const ExperimentConfig& cfg, std::vector<SchattenIndex> models,
                 bool with_datasets) {
    CVConfig cv;
    cv.models = read_models(keys, std::move(models));
    cv.folds = keys.get("folds", cv.folds);
    cv.grid = read_grid(keys, cv.grid);
    if (with_datasets) cv.n_datasets = keys.get("n_datasets", cv.n_datasets);
    cv.fit_options.strict = keys.get("strict", false);
    cv.seed = cfg.seed;
    cv.validate();
    return cv;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

std::string render_report(const BenchReport& report, OutputFormat format) {
    if (format == OutputFormat::Json) return dump(report_to_json(report));
    std::ostringstream out;
    write_report_csv(out, report);
    return out.str();
}

Index checked_size(Keys& keys, const std::string& key, Index fallback, Index min_value = 1) {
    const auto v = keys.get<std::int64_t>(key, fallback);
    if (v < min_value) throw ConfigError(key + " must be >= " + std::to_string(min_value));
    return static_cast<Index>(v);
}

}  // namespace

json load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("config '" + path + "' is not valid JSON: " + e.what());
    }
}

ExperimentConfig make_experiment(CommandKind kind, const json& config) {
    if (!config.is_object()) throw ConfigError("config must be a JSON object");
    ExperimentConfig cfg;
    cfg.kind = kind;
    for (const auto& [key, value] : config.items()) {
        try {
            if (key == "seed") {
                if (!value.is_number_integer() || value.get<std::int64_t>() < 0) throw ConfigError("seed must be a non-negative integer");
                cfg.seed = value.get<std::uint64_t>();
            }
            else if (key == "out")
                cfg.out = value.get<std::string>();
            else if (key == "format")
                cfg.format = parse_format(value.get<std::string>());
            else
                cfg.payload[key] = value;
        } catch (const json::exception& e) {
            throw ConfigError("config key '" + key + "' has the wrong type: " + e.what());
        }
    }
    return cfg;
}

void apply_override(ExperimentConfig& cfg, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError("override must look like key=value");
    const std::string key = assignment.substr(0, eq);
    const std::string text = assignment.substr(eq + 1);
    json value = json::parse(text, nullptr, false);
    if (value.is_discarded()) value = text;
    json wrapper = {{key, value}};
    const ExperimentConfig parsed = make_experiment(cfg.kind, wrapper);
    if (key == "seed")
        cfg.seed = parsed.seed;
    else if (key == "out")
        cfg.out = parsed.out;
    else if (key == "format")
        cfg.format = parsed.format;
    else
        cfg.payload[key] = value;
}

std::vector<SimulationRow> simulate_vs_theory(const SimulationSpec& spec, std::uint64_t seed) {
    if (spec.replicates < 1) throw ConfigError("replicates must be >= 1");
    if (spec.alphas.empty()) throw ConfigError("alpha grid is empty");
    if (spec.models.empty()) throw ConfigError("models must not be empty");
    const Index d = static_cast<Index>(std::llround(spec.lambda * static_cast<double>(spec.n_obs)));
    if (d < 1 || d >= spec.n_obs) throw ConfigError("lambda * n_obs must lie in [1, n_obs)");

    TheoryParams params;
    params.ensemble = spec.ensemble;
    params.lambda = static_cast<double>(d) / static_cast<double>(spec.n_obs);
    params.beta = spec.beta;
    params.sigma = spec.sigma;
    EnsembleSpec ensemble;
    if (spec.ensemble == EnsembleKind::Spherical) {
        ensemble.config = SphericalGaussianConfig{spec.n_obs, d, spec.beta, spec.sigma};
        ensemble.n_test = spec.n_test;
    } else {
        params.density = SpectralDensity::power_law(spec.gamma);
        DiagonalEnsembleConfig diag;
        diag.n_obs = spec.n_obs;
        diag.n_feat = d;
        diag.spectral_density = params.density;
        diag.noise_density.half_width = spec.noise_half_width;
        diag.beta = spec.beta;
        diag.sigma = spec.sigma;
        ensemble.config = diag;
    }

    const std::size_t n_models = spec.models.size(), n_alpha = spec.alphas.size();
    std::vector<double> mean(n_models * n_alpha, 0.0), m2(n_models * n_alpha, 0.0);
    for (int j = 0; j < spec.replicates; ++j) {
        const Dataset ds = sample_ensemble(ensemble, derive_seed(seed, static_cast<std::uint64_t>(j)));
        const SpectralFitter fitter(ds.X_tr, ds.Y_tr);
        for (std::size_t m = 0; m < n_models; ++m) {
            for (std::size_t a = 0; a < n_alpha; ++a) {
                const double err = empirical_mse(fitter.fit(spec.models[m], spec.alphas[a]), ds);
                const std::size_t k = m * n_alpha + a;
                const double delta = err - mean[k];
                mean[k] += delta / (j + 1);
                m2[k] += delta * (err - mean[k]);
            }
        }
    }

    std::vector<SimulationRow> rows;
    const double n = spec.replicates;
    for (std::size_t m = 0; m < n_models; ++m) {
        for (std::size_t a = 0; a < n_alpha; ++a) {
            const std::size_t k = m * n_alpha + a;
            SimulationRow row;
            row.p = spec.models[m];
            row.alpha = spec.alphas[a];
            row.empirical_mean = mean[k];
            row.empirical_se = spec.replicates > 1 ? std::sqrt(m2[k] / (n - 1.0) / n)
                                                   : std::numeric_limits<double>::quiet_NaN();
            row.theory = theory_error(row.p, row.alpha, params);
            rows.push_back(row);
        }
    }
    return rows;
}

std::string cmd_theory_curve(const ExperimentConfig& cfg) {
    Keys keys(cfg.payload, "theory-curve");
    TheoryParams params;
    params.ensemble = parse_ensemble(keys.get<std::string>("ensemble", "spherical"));
    params.lambda = keys.get("lambda", params.lambda);
    params.beta = keys.get("beta", params.beta);
    params.sigma = keys.get("sigma", params.sigma);
    const double gamma = keys.get("gamma", 1.0);
    if (params.ensemble == EnsembleKind::Diagonal) params.density = SpectralDensity::power_law(gamma);
    const auto models = read_models(keys, {std::begin(kAllEstimators), std::end(kAllEstimators)});
    const auto alphas = read_alphas(keys, AlphaGrid{1e-3, 1e3, 100});
    const TheoryMethod method = read_method(keys);
    keys.finish();

    std::vector<TheoryCurve> curves;
    for (auto p : models) curves.push_back(theory_curve(p, params, alphas, method));
    if (cfg.format == OutputFormat::Json) return dump(curves_to_json(curves));
    std::ostringstream out;
    write_curves_csv(out, curves);
    return out.str();
}

std::string cmd_simulate(const ExperimentConfig& cfg) {
    Keys keys(cfg.payload, "simulate");
    SimulationSpec spec;
    spec.ensemble = parse_ensemble(keys.get<std::string>("ensemble", "spherical"));
    spec.n_obs = checked_size(keys, "n_obs", spec.n_obs, 2);
    spec.lambda = keys.get("lambda", spec.lambda);
    spec.beta = keys.get("beta", spec.beta);
    spec.sigma = keys.get("sigma", spec.sigma);
    spec.gamma = keys.get("gamma", spec.gamma);
    spec.noise_half_width = keys.get("noise_half_width", spec.noise_half_width);
    spec.replicates = keys.get("replicates", spec.replicates);
    spec.n_test = checked_size(keys, "n_test", spec.n_test);
    spec.models = read_models(keys, spec.models);
    spec.alphas = read_alphas(keys, AlphaGrid{1e-3, 1e3, 30});
    keys.finish();

    const auto rows = simulate_vs_theory(spec, cfg.seed);
    if (cfg.format == OutputFormat::Json) return dump(simulation_to_json(rows));
    std::ostringstream out;
    write_simulation_csv(out, rows);
    return out.str();
}

std::string cmd_cv_bench(const ExperimentConfig& cfg) {
    Keys keys(cfg.payload, "cv-bench");
    const auto ensemble = keys.get<std::string>("ensemble", "equicorrelated");
    const Index n_obs = checked_size(keys, "n_obs", 100, 2);
    const Index n_feat = checked_size(keys, "n_feat", 50);
    const double beta = keys.get("beta", 1.0);
    const double sigma = keys.get("sigma", 1.0);
    const double rho = keys.get("rho", 0.0);
    const double gamma = keys.get("gamma", 1.0);
    const double noise_half_width = keys.get("noise_half_width", 0.0);
    const Index n_test = checked_size(keys, "n_test", kDefaultTestSize);
    std::optional<SparseSpec> sparse;
    if (const json* node = keys.child("sparse"); node && !node->is_null()) {
        Keys s(*node, "sparse");
        SparseSpec spec;
        spec.n_large = s.get("n_large", spec.n_large);
        spec.small_scale = s.get("small_scale", spec.small_scale);
        s.finish();
        sparse = spec;
    }
    const CVConfig cv = read_cv(keys, cfg, {std::begin(kAllEstimators), std::end(kAllEstimators)}, true);
    keys.finish();

    EnsembleSpec spec;
    spec.n_test = n_test;
    if (ensemble == "spherical") {
        spec.config = SphericalGaussianConfig{n_obs, n_feat, beta, sigma};
    } else if (ensemble == "diagonal") {
        DiagonalEnsembleConfig diag;
        diag.n_obs = n_obs;
        diag.n_feat = n_feat;
        diag.spectral_density = SpectralDensity::power_law(gamma);
        diag.noise_density.half_width = noise_half_width;
        diag.beta = beta;
        diag.sigma = sigma;
        spec.config = diag;
    } else if (ensemble == "equicorrelated") {
        spec.config = EquicorrelatedConfig{n_obs, n_feat, rho, sigma, sparse};
    } else {
        throw ConfigError("ensemble must be spherical, diagonal or equicorrelated");
    }
    BenchReport report = run_benchmark(spec, cv);
    report.metadata["ensemble"] = ensemble;
    return render_report(report, cfg.format);
}

std::string cmd_rff_bench(const ExperimentConfig& cfg) {
    Keys keys(cfg.payload, "rff-bench");
    RffBenchConfig rff;
    rff.d = checked_size(keys, "d", rff.d);
    rff.d_rbf = checked_size(keys, "d_rbf", rff.d_rbf);
    rff.n_obs = checked_size(keys, "n_obs", rff.n_obs, 2);
    rff.n_test = checked_size(keys, "n_test", rff.n_test);
    rff.sigma = keys.get("sigma", rff.sigma);
    rff.bandwidth = keys.get("bandwidth", rff.bandwidth);
    if (!(rff.bandwidth > 0.0)) throw ConfigError("bandwidth must be > 0");
    const CVConfig cv = read_cv(keys, cfg, {SchattenIndex::Nuclear, SchattenIndex::Frobenius}, true);
    keys.finish();
    return render_report(rff_benchmark(rff, cv), cfg.format);
}

std::string cmd_basin(const ExperimentConfig& cfg) {
    Keys keys(cfg.payload, "basin");
    GeometryTableSpec spec;
    spec.ensemble = parse_ensemble(keys.get<std::string>("ensemble", "spherical"));
    spec.sigmas = keys.get("sigmas", spec.sigmas);
    spec.params = keys.get("params", spec.params);
    spec.beta = keys.get("beta", spec.beta);
    spec.lambda = keys.get("lambda", spec.lambda);
    spec.estimators = read_models(keys, spec.estimators);
    if (const json* node = keys.child("grid")) {
        Keys g(*node, "grid");
        spec.grid.lo = g.get("lo", spec.grid.lo);
        spec.grid.hi = g.get("hi", spec.grid.hi);
        spec.grid.count = g.get("count", spec.grid.count);
        g.finish();
    }
    spec.method = read_method(keys);
    const bool self_test = keys.get("self_test", false);
    keys.finish();

    json checks = json::object();
    if (self_test) {
        // A parabola with known vertex and curvature must be recovered exactly.
        std::vector<double> xs, ys;
        for (int i = 0; i <= 200; ++i) {
            const double x = 0.1 + (10.0 - 0.1) * i / 200.0;
            xs.push_back(x);
            ys.push_back(1.5 * (x - 3.0) * (x - 3.0) + 0.25);
        }
        const BasinGeometry g = locate_min_and_curvature(xs, ys);
        const bool parabola_ok = std::abs(g.curvature - 3.0) < 1e-6 && std::abs(g.err_min - 0.25) < 1e-3;
        const double expected = expected_cv_minimum(1.0, 2.0, 1.0, 3);
        const MonteCarloEstimate mc = monte_carlo_parabola_min(1.0, 2.0, 1.0, 3, 100000, cfg.seed);
        const bool rule_ok = std::abs(mc.mean - expected) <= 4.0 * mc.std_error;
        if (!parabola_ok || !rule_ok)
            throw DegenerateFit("basin self-test failed (parabola " + std::string(parabola_ok ? "ok" : "bad") +
                                ", rule of thumb " + (rule_ok ? "ok" : "bad") + ")");
        checks = {{"parabola_curvature", g.curvature},
                  {"rule_of_thumb", expected},
                  {"monte_carlo_mean", mc.mean},
                  {"monte_carlo_std_error", mc.std_error}};
    }

    const GeometryTable table = geometry_table(spec);
    if (cfg.format == OutputFormat::Json) {
        json j = geometry_to_json(table);
        if (self_test) j["self_test"] = checks;
        return dump(j);
    }
    std::ostringstream out;
    write_geometry_csv(out, table);
    return out.str();
}

std::string cmd_real_data(const ExperimentConfig& cfg) {
    Keys keys(cfg.payload, "real-data");
    const auto path = keys.require<std::string>("path");
    const auto target = keys.require<std::string>("target");
    RealDataSplitSpec split;
    split.train_size = checked_size(keys, "train_size", split.train_size, 2);
    split.n_splits = keys.get("n_splits", split.n_splits);
    const CVConfig cv = read_cv(keys, cfg, {std::begin(kAllEstimators), std::end(kAllEstimators)}, false);
    keys.finish();

    const TabularDataset data = to_tabular(read_csv_file(path), target);
    if (data.X.cols() == 0) throw InsufficientData("no feature columns besides the target");
    BenchReport report = real_data_benchmark(data.X, data.y, split, cv);
    report.metadata["target"] = target;
    return render_report(report, cfg.format);
}

std::string run_experiment(const ExperimentConfig& cfg) {
    switch (cfg.kind) {
        case CommandKind::TheoryCurve: return cmd_theory_curve(cfg);
        case CommandKind::Simulate: return cmd_simulate(cfg);
        case CommandKind::CvBench: return cmd_cv_bench(cfg);
        case CommandKind::RffBench: return cmd_rff_bench(cfg);
        case CommandKind::Basin: return cmd_basin(cfg);
        case CommandKind::RealData: return cmd_real_data(cfg);
    }
    throw ConfigError("unknown command");
}

}  // namespace biasreg
