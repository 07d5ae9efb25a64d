#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "biasreg/commands.hpp"
#include "biasreg/errors.hpp"
#include "biasreg/io.hpp"

namespace biasreg {
namespace {

using nlohmann::json;

std::string temp_file(const std::string& name, const std::string& contents) {
    const auto path = std::filesystem::temp_directory_path() / ("biasreg_test_" + name);
    std::ofstream(path) << contents;
    return path.string();
}

TEST(Csv, ReadsHeaderAndValues) {
    std::istringstream in("a, b,y\n1,2,3\n\n4.5,-1e-3,6\n");
    const CsvTable t = read_csv(in);
    EXPECT_EQ(t.header, (std::vector<std::string>{"a", "b", "y"}));
    ASSERT_EQ(t.values.rows(), 2);
    EXPECT_EQ(t.values(1, 1), -1e-3);
    const TabularDataset ds = to_tabular(t, "b");
    EXPECT_EQ(ds.feature_names, (std::vector<std::string>{"a", "y"}));
    EXPECT_EQ(ds.y(0), 2.0);
    EXPECT_EQ(ds.X(1, 1), 6.0);
}

TEST(Csv, ParseErrorsCarryLocation) {
    std::istringstream bad("a,b\n1,2\n3,x\n");
    try {
        read_csv(bad);
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_NE(std::string(e.what()).find("line 3, column 2"), std::string::npos) << e.what();
    }
    std::istringstream ragged("a,b\n1,2,3\n");
    EXPECT_THROW(read_csv(ragged), ParseError);
    std::istringstream missing("a,b\n1,\n");
    EXPECT_THROW(read_csv(missing), ParseError);
    std::istringstream empty("");
    EXPECT_THROW(read_csv(empty), ParseError);
    std::istringstream ok("a,b\n1,2\n");
    EXPECT_THROW(to_tabular(read_csv(ok), "y"), MissingTarget);
}

TEST(Csv, DatasetWriterRoundTrip) {
    Rng rng(1);
    const MatrixXd X = gaussian_matrix(rng, 5, 3);
    const VectorXd y = gaussian_vector(rng, 5);
    std::ostringstream out;
    write_dataset_csv(out, X, y);
    std::istringstream in(out.str());
    const TabularDataset ds = to_tabular(read_csv(in), "y");
    EXPECT_EQ(ds.feature_names, (std::vector<std::string>{"x1", "x2", "x3"}));
    EXPECT_EQ(ds.X, X);
    EXPECT_EQ(ds.y, y);
}

TEST(Format, DoublesRoundTripExactly) {
    for (double v : {0.1, 1.0 / 3.0, 1e-300, 123456789.123456789, -2.5e17}) EXPECT_EQ(parse_double(format_double(v)), v);
    EXPECT_EQ(format_double(std::nan("")), "NA");
    EXPECT_TRUE(std::isnan(parse_double("NA")));
    EXPECT_TRUE(std::isinf(parse_double(format_double(kInfiniteAlpha))));
    EXPECT_THROW(parse_double("1.0abc"), ParseError);
}

TEST(Curves, CsvRoundTripIsExact) {
    TheoryParams sph;
    TheoryParams diag;
    diag.ensemble = EnsembleKind::Diagonal;
    diag.density = SpectralDensity::power_law(2.0);
    const auto alphas = log_grid(1e-3, 1e3, 7);
    const std::vector<TheoryCurve> curves = {theory_curve(SchattenIndex::Nuclear, sph, alphas),
                                             theory_curve(SchattenIndex::Frobenius, sph, alphas),
                                             theory_curve(SchattenIndex::Spectral, diag, alphas)};
    std::ostringstream out;
    write_curves_csv(out, curves);
    std::istringstream in(out.str());
    const auto back = read_curves_csv(in);
    ASSERT_EQ(back.size(), 3u);
    for (std::size_t i = 0; i < 3; ++i) {
        EXPECT_EQ(back[i].p, curves[i].p);
        EXPECT_EQ(back[i].ensemble, curves[i].ensemble);
        EXPECT_EQ(back[i].alphas, curves[i].alphas);
        EXPECT_EQ(back[i].errors, curves[i].errors);
        EXPECT_EQ(back[i].lambda, curves[i].lambda);
    }
    EXPECT_TRUE(std::isnan(back[0].gamma));
    EXPECT_EQ(back[2].gamma, 2.0);
}

ExperimentConfig config_for(CommandKind kind, json j) { return make_experiment(kind, j); }

TEST(Commands, TheoryCurveSpectralAtZero) {
    const auto cfg = config_for(CommandKind::TheoryCurve,
                                {{"models", {"spectral"}}, {"alphas", {0.0, 1.0}}, {"method", "closed"}});
    std::istringstream in(cmd_theory_curve(cfg));
    const auto curves = read_curves_csv(in);
    ASSERT_EQ(curves.size(), 1u);
    EXPECT_NEAR(curves[0].errors[0], 1.0, 1e-12);
    EXPECT_NEAR(curves[0].errors[1], 0.375, 1e-12);
}

TEST(Commands, ValidationFailures) {
    EXPECT_THROW(cmd_theory_curve(config_for(CommandKind::TheoryCurve, {{"alphas", json::array()}})), ConfigError);
    EXPECT_THROW(cmd_theory_curve(config_for(CommandKind::TheoryCurve, {{"grid", {{"count", 0}}}})), ConfigError);
    EXPECT_THROW(cmd_theory_curve(config_for(CommandKind::TheoryCurve, {{"lamda", 0.5}})), ConfigError);
    EXPECT_THROW(cmd_cv_bench(config_for(CommandKind::CvBench, {{"grid", {{"lo", 1}, {"hi", 2}, {"extra", 1}}}})),
                 ConfigError);
    EXPECT_THROW(cmd_cv_bench(config_for(CommandKind::CvBench, {{"models", json::array()}})), ConfigError);
    EXPECT_THROW(config_for(CommandKind::Simulate, {{"format", "xml"}}), ConfigError);
    EXPECT_THROW(config_for(CommandKind::Simulate, {{"seed", -3}}), ConfigError);
    EXPECT_THROW(cmd_real_data(config_for(CommandKind::RealData, {{"target", "y"}})), ConfigError);
}

TEST(Commands, OverridesTakePrecedence) {
    auto cfg = config_for(CommandKind::TheoryCurve, {{"sigma", 1.0}, {"seed", 3}});
    apply_override(cfg, "sigma=2");
    apply_override(cfg, "seed=9");
    apply_override(cfg, "format=json");
    apply_override(cfg, "ensemble=diagonal");
    EXPECT_EQ(cfg.payload["sigma"], 2);
    EXPECT_EQ(cfg.payload["ensemble"], "diagonal");
    EXPECT_EQ(cfg.seed, 9u);
    EXPECT_EQ(cfg.format, OutputFormat::Json);
    EXPECT_THROW(apply_override(cfg, "novalue"), ConfigError);
}

TEST(Commands, SimulateSingleReplicateHasMissingSe) {
    const auto cfg = config_for(CommandKind::Simulate, {{"replicates", 1},
                                                        {"n_obs", 40},
                                                        {"n_test", 100},
                                                        {"alphas", {0.5, 2.0}},
                                                        {"seed", 4}});
    const std::string text = cmd_simulate(cfg);
    std::istringstream in(text);
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "alpha,model,empirical_mean,empirical_se,theory");
    int rows = 0;
    while (std::getline(in, line)) {
        ++rows;
        EXPECT_NE(line.find(",NA,"), std::string::npos) << line;
    }
    EXPECT_EQ(rows, 6);
    EXPECT_EQ(cmd_simulate(cfg), text);
}

TEST(Commands, CvBenchJsonHasReportFields) {
    const auto cfg = config_for(CommandKind::CvBench, {{"n_datasets", 2},
                                                       {"n_obs", 30},
                                                       {"n_feat", 5},
                                                       {"n_test", 50},
                                                       {"format", "json"},
                                                       {"models", {"ridge"}}});
    const json j = json::parse(cmd_cv_bench(cfg));
    for (const char* key : {"models", "mse", "selected_alphas", "avg_error", "std_error", "win_count", "win_prob",
                            "ratio_to_ridge", "best_avg", "best_mode", "metadata", "n_datasets"})
        EXPECT_TRUE(j.contains(key)) << key;
    EXPECT_EQ(j["best_avg"], "ridge");
    EXPECT_EQ(j["win_prob"][0], 1.0);
}

TEST(Commands, RealDataFromCsv) {
    Rng rng(5);
    const MatrixXd X = gaussian_matrix(rng, 60, 3);
    const VectorXd y = X * VectorXd::Ones(3) + gaussian_vector(rng, 60, 0.1);
    std::ostringstream csv;
    write_dataset_csv(csv, X, y);
    const std::string path = temp_file("real.csv", csv.str());
    const auto cfg = config_for(CommandKind::RealData, {{"path", path},
                                                        {"target", "y"},
                                                        {"train_size", 30},
                                                        {"n_splits", 4},
                                                        {"format", "json"}});
    const json j = json::parse(cmd_real_data(cfg));
    EXPECT_EQ(j["n_datasets"], 4);
    EXPECT_EQ(j["metadata"]["target_centering"], "train_mean");
    EXPECT_EQ(cmd_real_data(cfg), cmd_real_data(cfg));

    auto missing = cfg;
    missing.payload["target"] = "nope";
    EXPECT_THROW(cmd_real_data(missing), MissingTarget);
    auto broken = cfg;
    broken.payload["path"] = temp_file("broken.csv", "a,y\n1,2\n3,?\n");
    EXPECT_THROW(cmd_real_data(broken), ParseError);
}

TEST(Commands, BasinCsvLayoutAndSelfTest) {
    const auto cfg = config_for(CommandKind::Basin, {{"sigmas", {1.0}},
                                                     {"params", {0.5}},
                                                     {"self_test", true},
                                                     {"grid", {{"count", 200}}}});
    std::istringstream in(cmd_basin(cfg));
    std::string header, line;
    std::getline(in, header);
    EXPECT_EQ(header, "sigma,estimator,lambda=0.5");
    std::getline(in, line);
    EXPECT_EQ(line.rfind("1,nuclear,", 0), 0u);
    std::getline(in, line);
    EXPECT_EQ(line, "1,ridge,0/0");
}

TEST(Commands, ConfigFileLoading) {
    const std::string good = temp_file("cfg.json", R"({"seed": 5, "sigma": 2.0, "out": "x.csv"})");
    const auto cfg = make_experiment(CommandKind::TheoryCurve, load_config_file(good));
    EXPECT_EQ(cfg.seed, 5u);
    EXPECT_EQ(*cfg.out, "x.csv");
    EXPECT_EQ(cfg.payload.size(), 1u);
    EXPECT_THROW(load_config_file(temp_file("bad.json", "{not json")), ConfigError);
    EXPECT_THROW(load_config_file("/nonexistent/config.json"), ConfigError);
    EXPECT_EQ(parse_command("rff-bench"), CommandKind::RffBench);
    EXPECT_THROW(parse_command("plot"), ConfigError);
}

}  // namespace
}  // namespace biasreg
