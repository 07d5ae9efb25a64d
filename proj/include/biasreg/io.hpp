#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "biasreg/basin.hpp"
#include "biasreg/cv.hpp"
#include "biasreg/theory.hpp"

namespace biasreg {

/// Numeric table read from a CSV file with a header row.
struct CsvTable {
    std::vector<std::string> header;
    MatrixXd values;
};

/// Comma-separated, header row required, every cell numeric. ParseError
/// messages carry the 1-based line and column of the offending cell.
CsvTable read_csv(std::istream& in);
CsvTable read_csv_file(const std::string& path);

struct TabularDataset {
    MatrixXd X;
    VectorXd y;
    std::vector<std::string> feature_names;
    std::string target_name;
};

/// Splits a table into features and the named target column. Throws
/// MissingTarget when the column is absent.
TabularDataset to_tabular(const CsvTable& table, const std::string& target);

/// Shortest text that parses back to the same double (17 significant digits
/// at most); "inf" for infinity, "NA" for NaN.
std::string format_double(double value);
double parse_double(const std::string& text);

/// Header x1..xd,y followed by one row per observation.
void write_dataset_csv(std::ostream& out, const MatrixXd& X, const VectorXd& y);

/// Long format: alpha,error,p,ensemble,lambda,beta,sigma,gamma.
void write_curves_csv(std::ostream& out, const std::vector<TheoryCurve>& curves);
/// Inverse of write_curves_csv; consecutive rows sharing (p, ensemble, lambda,
/// beta, sigma, gamma) form one curve.
std::vector<TheoryCurve> read_curves_csv(std::istream& in);

nlohmann::json curves_to_json(const std::vector<TheoryCurve>& curves);

/// Full per-dataset matrices plus every summary field.
nlohmann::json report_to_json(const BenchReport& report);
/// One row per model: summary statistics and best_avg / best_mode flags.
void write_report_csv(std::ostream& out, const BenchReport& report);

/// Rows are (sigma, estimator), columns the lambda or gamma values, entries
/// "depth%/curvature%".
void write_geometry_csv(std::ostream& out, const GeometryTable& table);
nlohmann::json geometry_to_json(const GeometryTable& table);

/// Empirical mean test error against the theory prediction at one alpha.
struct SimulationRow {
    SchattenIndex p = SchattenIndex::Frobenius;
    double alpha = 0.0;
    double empirical_mean = 0.0;
    double empirical_se = 0.0;  // NaN with a single replicate
    double theory = 0.0;
};

void write_simulation_csv(std::ostream& out, const std::vector<SimulationRow>& rows);
nlohmann::json simulation_to_json(const std::vector<SimulationRow>& rows);

}  // namespace biasreg
