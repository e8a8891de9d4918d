#include "report.hpp"

#include <cmath>
#include <cstdio>

#include "feynpath/version.hpp"

namespace feynpath::cli {

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (v == 0.0) return "0";  // folds -0
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.15g", v);
    return buf;
}

namespace {

std::string scalar_text(const nlohmann::ordered_json& v) {
    if (v.is_number_float()) return format_number(v.get<double>());
    if (v.is_string()) return v.get<std::string>();
    return v.dump();
}

void write_object_lines(std::ostream& os, const char* label, const nlohmann::ordered_json& obj) {
    if (obj.empty()) return;
    os << "# " << label << ':';
    for (const auto& [k, v] : obj.items()) os << ' ' << k << '=' << scalar_text(v);
    os << '\n';
}

nlohmann::ordered_json rounded(double v) {
    if (!std::isfinite(v)) return format_number(v);
    return std::stod(format_number(v));
}

}  // namespace

void write_csv(std::ostream& os, const Report& r) {
    os << "# feynpath " << kVersion << " schema " << kSchemaVersion << ' ' << r.command << '\n';
    if (!r.params.empty()) {
        os << "# params:";
        for (const auto& [k, v] : r.params) os << ' ' << k << '=' << v;
        os << '\n';
    }
    if (r.seed) os << "# seed: " << *r.seed << '\n';
    write_object_lines(os, "results", r.results);
    write_object_lines(os, "errors", r.errors);
    for (std::size_t i = 0; i < r.columns.size(); ++i) os << (i ? "," : "") << r.columns[i];
    if (!r.columns.empty()) os << '\n';
    for (const auto& row : r.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << format_number(row[i]);
        os << '\n';
    }
}

void write_json(std::ostream& os, const Report& r) {
    nlohmann::ordered_json j;
    nlohmann::ordered_json params = nlohmann::ordered_json::object();
    for (const auto& [k, v] : r.params) params[k] = v;
    params["command"] = r.command;
    j["params"] = params;
    nlohmann::ordered_json results = r.results;
    if (!r.columns.empty()) {
        nlohmann::ordered_json table;
        table["columns"] = r.columns;
        nlohmann::ordered_json rows = nlohmann::ordered_json::array();
        for (const auto& row : r.rows) {
            nlohmann::ordered_json line = nlohmann::ordered_json::array();
            for (double v : row) line.push_back(rounded(v));
            rows.push_back(line);
        }
        table["rows"] = rows;
        results["table"] = table;
    }
    j["results"] = results;
    j["errors"] = r.errors;
    j["seed"] = r.seed ? nlohmann::ordered_json(*r.seed) : nlohmann::ordered_json(nullptr);
    j["version"] = std::string(kVersion) + " schema " + std::to_string(kSchemaVersion);
    os << j.dump(2) << '\n';
}

}  // namespace feynpath::cli
