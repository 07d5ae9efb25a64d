// Command-line front end: one subcommand per experiment, each reading an
// optional JSON config that command-line flags override.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "biasreg/commands.hpp"
#include "biasreg/errors.hpp"

namespace {

struct CommonFlags {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::string out;
    std::string format;
    std::vector<std::string> overrides;
};

void add_common_flags(CLI::App* sub, CommonFlags& flags) {
    sub->add_option("--config", flags.config, "JSON config file")->check(CLI::ExistingFile);
    sub->add_option("--seed", flags.seed, "master seed");
    sub->add_option("--out", flags.out, "output path (default: stdout)");
    sub->add_option("--format", flags.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--set", flags.overrides, "override a config key, e.g. --set sigma=2");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Schatten-norm bias-constrained linear estimators: theory curves, simulations and benchmarks"};
    app.require_subcommand(1);

    const char* descriptions[][2] = {
        {"theory-curve", "asymptotic test-error curves"},
        {"simulate", "Monte Carlo test error against theory"},
        {"cv-bench", "cross-validated benchmark on a synthetic ensemble"},
        {"rff-bench", "cross-validated benchmark on random Fourier features"},
        {"basin", "loss-basin depth and curvature table"},
        {"real-data", "cross-validated benchmark on a CSV dataset"},
    };
    std::vector<CommonFlags> flags(std::size(descriptions));
    std::vector<CLI::App*> subs;
    for (std::size_t i = 0; i < std::size(descriptions); ++i) {
        CLI::App* sub = app.add_subcommand(descriptions[i][0], descriptions[i][1]);
        add_common_flags(sub, flags[i]);
        subs.push_back(sub);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        for (std::size_t i = 0; i < subs.size(); ++i) {
            if (!subs[i]->parsed()) continue;
            const CommonFlags& f = flags[i];
            const auto kind = biasreg::parse_command(descriptions[i][0]);
            const nlohmann::json file =
                f.config.empty() ? nlohmann::json::object() : biasreg::load_config_file(f.config);
            biasreg::ExperimentConfig cfg = biasreg::make_experiment(kind, file);
            for (const auto& assignment : f.overrides) biasreg::apply_override(cfg, assignment);
            if (f.seed) cfg.seed = *f.seed;
            if (!f.out.empty()) cfg.out = f.out;
            if (!f.format.empty()) cfg.format = biasreg::parse_format(f.format);

            const std::string text = biasreg::run_experiment(cfg);
            if (cfg.out) {
                std::ofstream out(*cfg.out, std::ios::binary);
                if (!out) throw biasreg::ConfigError("cannot write '" + *cfg.out + "'");
                out << text;
                if (!out) throw biasreg::ConfigError("write to '" + *cfg.out + "' failed");
            } else {
                std::cout << text;
            }
        }
    } catch (const biasreg::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
