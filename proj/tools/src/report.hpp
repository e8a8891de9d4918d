#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace feynpath::cli {

inline constexpr int kSchemaVersion = 1;

// Everything a subcommand emits. Tables go to CSV rows; results and errors
// become comment lines in CSV and objects in JSON.
struct Report {
    std::string command;
    std::vector<std::pair<std::string, std::string>> params;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    nlohmann::ordered_json results = nlohmann::ordered_json::object();
    nlohmann::ordered_json errors = nlohmann::ordered_json::object();
    std::optional<std::uint64_t> seed;
};

// 15 significant digits, shortest form.
std::string format_number(double v);

void write_csv(std::ostream& os, const Report& report);
void write_json(std::ostream& os, const Report& report);

}  // namespace feynpath::cli
