#pragma once

#include <functional>
#include <vector>

#include <CLI11.hpp>

#include "report.hpp"

namespace feynpath::cli {

struct Context {
    unsigned threads = 1;
};

struct Command {
    CLI::App* app = nullptr;
    std::function<Report(const Context&)> execute;
};

// Adds every subcommand to `app`. Option storage lives inside the returned
// closures, so the vector must outlive parsing.
std::vector<Command> register_commands(CLI::App& app);

}  // namespace feynpath::cli
