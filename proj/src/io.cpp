#include "biasreg/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "biasreg/errors.hpp"

namespace biasreg {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string> split_commas(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ',')) cells.push_back(trim(cell));
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

std::string where(std::size_t line, std::size_t column) {
    return "line " + std::to_string(line) + ", column " + std::to_string(column);
}

bool parse_strict(const std::string& text, double& value) {
    if (text.empty()) return false;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    if (*first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, value);
    return ec == std::errc() && ptr == last;
}

}  // namespace

CsvTable read_csv(std::istream& in) {
    CsvTable table;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!trim(line).empty()) break;
    }
    if (trim(line).empty()) throw ParseError("empty input: a header row is required");
    if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
    table.header = split_commas(line);
    const std::size_t cols = table.header.size();
    for (std::size_t c = 0; c < cols; ++c)
        if (table.header[c].empty()) throw ParseError("empty header name at " + where(line_no, c + 1));

    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto cells = split_commas(line);
        if (cells.size() != cols)
            throw ParseError("expected " + std::to_string(cols) + " fields, found " +
                             std::to_string(cells.size()) + " at " + where(line_no, 1));
        std::vector<double> row(cols);
        for (std::size_t c = 0; c < cols; ++c) {
            if (!parse_strict(cells[c], row[c]) || !std::isfinite(row[c]))
                throw ParseError("non-numeric or missing value '" + cells[c] + "' at " +
                                 where(line_no, c + 1));
        }
        rows.push_back(std::move(row));
    }
    table.values.resize(static_cast<Index>(rows.size()), static_cast<Index>(cols));
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < cols; ++c)
            table.values(static_cast<Index>(r), static_cast<Index>(c)) = rows[r][c];
    return table;
}

CsvTable read_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'");
    return read_csv(in);
}

TabularDataset to_tabular(const CsvTable& table, const std::string& target) {
    Index target_col = -1;
    for (std::size_t c = 0; c < table.header.size(); ++c)
        if (table.header[c] == target) target_col = static_cast<Index>(c);
    if (target_col < 0) throw MissingTarget("no column named '" + target + "'");

    TabularDataset ds;
    ds.target_name = target;
    ds.y = table.values.col(target_col);
    ds.X.resize(table.values.rows(), table.values.cols() - 1);
    Index out = 0;
    for (Index c = 0; c < table.values.cols(); ++c) {
        if (c == target_col) continue;
        ds.X.col(out++) = table.values.col(c);
        ds.feature_names.push_back(table.header[static_cast<std::size_t>(c)]);
    }
    return ds;
}

std::string format_double(double value) {
    if (std::isnan(value)) return "NA";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

double parse_double(const std::string& text) {
    const std::string t = trim(text);
    if (t == "NA" || t == "nan") return std::numeric_limits<double>::quiet_NaN();
    if (t == "inf") return std::numeric_limits<double>::infinity();
    if (t == "-inf") return -std::numeric_limits<double>::infinity();
    double v = 0.0;
    if (!parse_strict(t, v)) throw ParseError("not a number: '" + t + "'");
    return v;
}

void write_dataset_csv(std::ostream& out, const MatrixXd& X, const VectorXd& y) {
    if (X.rows() != y.size()) throw DimensionMismatch("X and y disagree in row count");
    for (Index j = 0; j < X.cols(); ++j) out << 'x' << j + 1 << ',';
    out << "y\n";
    for (Index i = 0; i < X.rows(); ++i) {
        for (Index j = 0; j < X.cols(); ++j) out << format_double(X(i, j)) << ',';
        out << format_double(y(i)) << '\n';
    }
}

void write_curves_csv(std::ostream& out, const std::vector<TheoryCurve>& curves) {
    out << "alpha,error,p,ensemble,lambda,beta,sigma,gamma\n";
    for (const auto& c : curves) {
        if (c.alphas.size() != c.errors.size()) throw DimensionMismatch("curve alphas and errors differ");
        for (std::size_t i = 0; i < c.alphas.size(); ++i) {
            out << format_double(c.alphas[i]) << ',' << format_double(c.errors[i]) << ','
                << model_name(c.p) << ',' << ensemble_name(c.ensemble) << ','
                << format_double(c.lambda) << ',' << format_double(c.beta) << ','
                << format_double(c.sigma) << ',' << format_double(c.gamma) << '\n';
        }
    }
}

std::vector<TheoryCurve> read_curves_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || trim(line) != "alpha,error,p,ensemble,lambda,beta,sigma,gamma")
        throw ParseError("unexpected curve header at line 1");
    std::vector<TheoryCurve> curves;
    std::size_t line_no = 1;
    auto same = [](double a, double b) { return a == b || (std::isnan(a) && std::isnan(b)); };
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto cells = split_commas(line);
        if (cells.size() != 8) throw ParseError("expected 8 fields at " + where(line_no, 1));
        double num[6];
        const std::size_t numeric_cols[6] = {0, 1, 4, 5, 6, 7};
        for (int k = 0; k < 6; ++k) {
            try {
                num[k] = parse_double(cells[numeric_cols[k]]);
            } catch (const ParseError&) {
                throw ParseError("bad number at " + where(line_no, numeric_cols[k] + 1));
            }
        }
        const SchattenIndex p = parse_model(cells[2]);
        const EnsembleKind e = parse_ensemble(cells[3]);
        if (curves.empty() || curves.back().p != p || curves.back().ensemble != e ||
            !same(curves.back().lambda, num[2]) || !same(curves.back().beta, num[3]) ||
            !same(curves.back().sigma, num[4]) || !same(curves.back().gamma, num[5])) {
            TheoryCurve c;
            c.p = p;
            c.ensemble = e;
            c.lambda = num[2];
            c.beta = num[3];
            c.sigma = num[4];
            c.gamma = num[5];
            curves.push_back(std::move(c));
        }
        curves.back().alphas.push_back(num[0]);
        curves.back().errors.push_back(num[1]);
    }
    return curves;
}

namespace {

// JSON has no NaN / inf; they become null and "inf".
nlohmann::json json_number(double v) {
    if (std::isnan(v)) return nullptr;
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return v;
}

nlohmann::json json_array(const std::vector<double>& values) {
    nlohmann::json arr = nlohmann::json::array();
    for (double v : values) arr.push_back(json_number(v));
    return arr;
}

}  // namespace

nlohmann::json curves_to_json(const std::vector<TheoryCurve>& curves) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& c : curves) {
        arr.push_back({{"p", model_name(c.p)},
                       {"ensemble", ensemble_name(c.ensemble)},
                       {"lambda", c.lambda},
                       {"beta", c.beta},
                       {"sigma", c.sigma},
                       {"gamma", json_number(c.gamma)},
                       {"alpha", json_array(c.alphas)},
                       {"error", json_array(c.errors)}});
    }
    return arr;
}

nlohmann::json report_to_json(const BenchReport& r) {
    nlohmann::json j;
    nlohmann::json models = nlohmann::json::array();
    for (auto m : r.models) models.push_back(model_name(m));
    j["models"] = models;
    j["n_datasets"] = r.n_datasets;
    nlohmann::json mse = nlohmann::json::object(), alphas = nlohmann::json::object();
    for (std::size_t m = 0; m < r.models.size(); ++m) {
        const std::string name(model_name(r.models[m]));
        mse[name] = json_array(r.mse[m]);
        alphas[name] = json_array(r.selected_alphas[m]);
    }
    j["mse"] = mse;
    j["selected_alphas"] = alphas;
    j["avg_error"] = json_array(r.avg_error);
    j["std_error"] = json_array(r.std_error);
    j["win_count"] = r.win_count;
    j["win_prob"] = json_array(r.win_prob);
    j["ratio_to_ridge"] = json_array(r.ratio_to_ridge);
    j["best_avg"] = model_name(r.best_avg);
    j["best_mode"] = model_name(r.best_mode);
    j["metadata"] = r.metadata;
    return j;
}

void write_report_csv(std::ostream& out, const BenchReport& r) {
    out << "model,avg_error,std_error,win_count,win_prob,ratio_to_ridge,best_avg,best_mode\n";
    for (std::size_t m = 0; m < r.models.size(); ++m) {
        const double ratio = r.ratio_to_ridge.empty() ? std::numeric_limits<double>::quiet_NaN()
                                                      : r.ratio_to_ridge[m];
        out << model_name(r.models[m]) << ',' << format_double(r.avg_error[m]) << ','
            << format_double(r.std_error[m]) << ',' << r.win_count[m] << ','
            << format_double(r.win_prob[m]) << ',' << format_double(ratio) << ','
            << (r.models[m] == r.best_avg ? 1 : 0) << ',' << (r.models[m] == r.best_mode ? 1 : 0)
            << '\n';
    }
}

void write_geometry_csv(std::ostream& out, const GeometryTable& t) {
    out << "sigma,estimator";
    const char* label = t.ensemble == EnsembleKind::Spherical ? "lambda=" : "gamma=";
    for (double param : t.params) out << ',' << label << format_double(param);
    out << '\n';
    for (double sigma : t.sigmas) {
        for (auto p : t.estimators) {
            out << format_double(sigma) << ',' << model_name(p);
            for (double param : t.params) {
                const GeometryCell& c = t.at(sigma, param, p);
                out << ',' << format_double(c.depth_increase_pct) << '/'
                    << format_double(c.curvature_increase_pct);
            }
            out << '\n';
        }
    }
}

nlohmann::json geometry_to_json(const GeometryTable& t) {
    nlohmann::json cells = nlohmann::json::array();
    for (const auto& c : t.cells) {
        cells.push_back({{"sigma", c.sigma},
                         {"param", c.param},
                         {"estimator", model_name(c.p)},
                         {"alpha_min", c.geometry.alpha_min},
                         {"err_min", c.geometry.err_min},
                         {"curvature", c.geometry.curvature},
                         {"kappa", c.geometry.kappa},
                         {"edge", c.geometry.edge},
                         {"depth_increase_pct", c.depth_increase_pct},
                         {"curvature_increase_pct", c.curvature_increase_pct}});
    }
    return {{"ensemble", ensemble_name(t.ensemble)},
            {"param_name", t.ensemble == EnsembleKind::Spherical ? "lambda" : "gamma"},
            {"cells", cells}};
}

void write_simulation_csv(std::ostream& out, const std::vector<SimulationRow>& rows) {
    out << "alpha,model,empirical_mean,empirical_se,theory\n";
    for (const auto& r : rows) {
        out << format_double(r.alpha) << ',' << model_name(r.p) << ',' << format_double(r.empirical_mean)
            << ',' << format_double(r.empirical_se) << ',' << format_double(r.theory) << '\n';
    }
}

nlohmann::json simulation_to_json(const std::vector<SimulationRow>& rows) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : rows) {
        arr.push_back({{"alpha", r.alpha},
                       {"model", model_name(r.p)},
                       {"empirical_mean", r.empirical_mean},
                       {"empirical_se", json_number(r.empirical_se)},
                       {"theory", r.theory}});
    }
    return arr;
}

}  // namespace biasreg
