#pragma once

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "jacobi_spectra/jacobi_coeff.hpp"
#include "jacobi_spectra/ldp.hpp"
#include "jacobi_spectra/stats.hpp"

namespace jacobi_spectra {

inline constexpr const char* library_version = "1.0.0";

// Shortest round-trip decimal form.
inline std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0.0 ? "inf" : "-inf";
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

// JSON value for a possibly infinite quantity (JSON numbers cannot be inf).
inline nlohmann::json json_extended(double x) {
    if (std::isfinite(x)) return x;
    return format_double(x);
}

inline std::string csv_row(const std::vector<std::string>& fields) {
    std::string row;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i > 0) row += ',';
        row += fields[i];
    }
    return row;
}

inline nlohmann::json coefficients_to_json(const ChainDecomposition& d,
                                           const std::vector<double>& a,
                                           const std::vector<double>& b) {
    nlohmann::json j;
    j["a"] = a;
    j["b"] = b;
    j["z"] = d.z;
    j["p"] = d.p;
    j["u"] = d.u;
    j["v"] = d.v;
    return j;
}

// Reads {"a": [...], "b": [...]} (extra keys ignored).
inline JacobiCoefficients coefficients_from_json(const nlohmann::json& j) {
    if (!j.contains("a") || !j.contains("b"))
        throw std::invalid_argument("coefficients: JSON must contain arrays \"a\" and \"b\"");
    JacobiCoefficients jc;
    jc.a = j.at("a").get<std::vector<double>>();
    jc.b = j.at("b").get<std::vector<double>>();
    return jc;
}

inline JacobiCoefficients load_coefficients(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("coefficients: cannot open " + path);
    nlohmann::json j;
    in >> j;
    return coefficients_from_json(j);
}

inline nlohmann::json rate_to_json(const RateValue& rv) {
    nlohmann::json j;
    j["value"] = json_extended(rv.value);
    nlohmann::json terms = nlohmann::json::array();
    for (double t : rv.terms) terms.push_back(json_extended(t));
    j["terms"] = std::move(terms);
    j["truncation_K"] = rv.truncation_K;
    j["tail_estimate"] = json_extended(rv.tail_estimate);
    if (!rv.failure_stage.empty()) {
        j["failure_stage"] = rv.failure_stage;
        j["failure_index"] = rv.failure_index;
    }
    return j;
}

inline nlohmann::json report_to_json(const ExperimentReport& report) {
    nlohmann::json j;
    j["experiment"] = report.experiment;
    j["gamma"] = report.limit.gamma;
    j["sigma"] = report.limit.sigma;
    j["regime"] = regime_name(report.limit.regime);
    j["beta"] = report.beta;
    j["reps"] = report.reps;
    j["master_seed"] = report.master_seed;
    j["version"] = library_version;
    nlohmann::json cells = nlohmann::json::array();
    for (const MetricCell& cell : report.cells) {
        nlohmann::json c;
        c["n"] = cell.ensemble.n;
        c["beta"] = cell.ensemble.beta;
        c["p1"] = cell.ensemble.p1;
        c["p2"] = cell.ensemble.p2;
        c["reps"] = cell.reps;
        c["failures"] = cell.failures;
        c["master_seed"] = cell.master_seed;
        c["stream_base"] = cell.stream_base;
        nlohmann::json metrics;
        for (const auto& [name, value] : cell.metrics) metrics[name] = json_extended(value);
        c["metrics"] = std::move(metrics);
        cells.push_back(std::move(c));
    }
    j["cells"] = std::move(cells);
    return j;
}

// One row per cell; metric columns follow the fixed experiment order.
inline std::vector<std::string> report_to_csv_rows(const ExperimentReport& report) {
    std::vector<std::string> rows;
    std::vector<std::string> head{"n", "beta", "p1", "p2", "reps", "failures"};
    if (!report.cells.empty())
        for (const auto& [name, value] : report.cells.front().metrics) head.push_back(name);
    rows.push_back(csv_row(head));
    for (const MetricCell& cell : report.cells) {
        std::vector<std::string> fields{
            std::to_string(cell.ensemble.n), format_double(cell.ensemble.beta),
            format_double(cell.ensemble.p1), format_double(cell.ensemble.p2),
            std::to_string(cell.reps),       std::to_string(cell.failures)};
        for (const auto& [name, value] : cell.metrics) fields.push_back(format_double(value));
        rows.push_back(csv_row(fields));
    }
    return rows;
}

} // namespace jacobi_spectra
