#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace feynpath::cli {

enum ExitCode : int { kOk = 0, kFailure = 1, kDomain = 2, kNumerical = 3 };

// args excludes the program name. Output goes to --out when given, else `out`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

struct SelfTestLine {
    std::string name;
    double error = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

// Quick closed-form checks across all modules.
std::vector<SelfTestLine> self_test();

}  // namespace feynpath::cli
