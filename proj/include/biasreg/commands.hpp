#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "biasreg/io.hpp"

namespace biasreg {

enum class CommandKind { TheoryCurve, Simulate, CvBench, RffBench, Basin, RealData };
enum class OutputFormat { Csv, Json };

std::string_view command_name(CommandKind kind);
CommandKind parse_command(std::string_view name);
OutputFormat parse_format(std::string_view name);

/// A parsed experiment: the common fields plus the command-specific payload.
/// The payload is validated (unknown keys rejected) when the command runs.
struct ExperimentConfig {
    CommandKind kind = CommandKind::TheoryCurve;
    nlohmann::json payload = nlohmann::json::object();
    std::uint64_t seed = 0;
    std::optional<std::string> out;
    OutputFormat format = OutputFormat::Csv;
};

/// Parses a JSON config file. Throws ConfigError on IO or syntax errors.
nlohmann::json load_config_file(const std::string& path);

/// Splits the common keys (seed, out, format) out of a config object.
ExperimentConfig make_experiment(CommandKind kind, const nlohmann::json& config);

/// Applies "key=value" to the payload. The value is parsed as JSON when it
/// parses, otherwise kept as a string.
void apply_override(ExperimentConfig& cfg, const std::string& assignment);

/// Monte Carlo test error against theory on a shared alpha grid.
struct SimulationSpec {
    EnsembleKind ensemble = EnsembleKind::Spherical;
    Index n_obs = 100;
    double lambda = 0.5;  // n_feat = round(lambda * n_obs)
    double beta = 1.0;
    double sigma = 1.0;
    double gamma = 1.0;             // diagonal only
    double noise_half_width = 0.0;  // diagonal only
    int replicates = 100;
    Index n_test = kDefaultTestSize;  // spherical only
    std::vector<double> alphas;
    std::vector<SchattenIndex> models{SchattenIndex::Nuclear, SchattenIndex::Frobenius,
                                      SchattenIndex::Spectral};
};

/// Rows are model-major. Replicate j uses derive_seed(seed, j).
std::vector<SimulationRow> simulate_vs_theory(const SimulationSpec& spec, std::uint64_t seed);

/// Each command returns the rendered output in cfg.format.
std::string cmd_theory_curve(const ExperimentConfig& cfg);
std::string cmd_simulate(const ExperimentConfig& cfg);
std::string cmd_cv_bench(const ExperimentConfig& cfg);
std::string cmd_rff_bench(const ExperimentConfig& cfg);
std::string cmd_basin(const ExperimentConfig& cfg);
std::string cmd_real_data(const ExperimentConfig& cfg);

std::string run_experiment(const ExperimentConfig& cfg);

}  // namespace biasreg
