#include "cli.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "commands.hpp"
#include "feynpath/errors.hpp"
#include "feynpath/parallel.hpp"
#include "feynpath/version.hpp"

namespace feynpath::cli {

namespace {

// Pulls "--config FILE" out of args and splices the file's key=value pairs in
// right after the subcommand name, so explicit flags still win.
std::vector<std::string> expand_config(std::vector<std::string> args,
                                       const std::vector<std::string>& subcommands) {
    std::string path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config") {
            if (i + 1 >= args.size()) throw CLI::ConfigError("--config needs a file name");
            path = args[i + 1];
            args.erase(args.begin() + static_cast<std::ptrdiff_t>(i), args.begin() + static_cast<std::ptrdiff_t>(i) + 2);
            break;
        }
        if (args[i].rfind("--config=", 0) == 0) {
            path = args[i].substr(9);
            args.erase(args.begin() + static_cast<std::ptrdiff_t>(i));
            break;
        }
    }
    if (path.empty()) return args;
    std::ifstream in(path);
    if (!in) throw CLI::ConfigError("cannot open config file " + path);
    const std::vector<CLI::ConfigItem> items = CLI::ConfigTOML().from_config(in);
    std::vector<std::string> injected;
    for (const auto& item : items) {
        if (!item.parents.empty()) throw CLI::ConfigError("sections are not supported: " + item.fullname());
        if (item.name.empty() || item.name.find(' ') != std::string::npos)
            throw CLI::ConfigError("malformed config key '" + item.name + "'");
        std::string value;
        for (std::size_t k = 0; k < item.inputs.size(); ++k) value += (k ? "," : "") + item.inputs[k];
        injected.push_back("--" + item.name + "=" + value);
    }
    auto pos = std::find_if(args.begin(), args.end(), [&](const std::string& a) {
        return std::find(subcommands.begin(), subcommands.end(), a) != subcommands.end();
    });
    if (pos == args.end()) throw CLI::ConfigError("--config needs a subcommand");
    args.insert(pos + 1, injected.begin(), injected.end());
    return args;
}

std::vector<std::pair<std::string, std::string>> collect_params(const CLI::App* sub) {
    std::vector<std::pair<std::string, std::string>> params;
    for (const CLI::Option* opt : sub->get_options()) {
        if (opt->get_lnames().empty() || opt->get_lnames().front() == "help") continue;
        const std::string name = opt->get_lnames().front();
        std::string value;
        if (opt->get_expected_min() == 0) {
            value = opt->count() > 0 ? "true" : "false";
        } else if (opt->count() > 0) {
            const auto& res = opt->results();
            for (std::size_t k = 0; k < res.size(); ++k) value += (k ? "," : "") + res[k];
        } else {
            value = opt->get_default_str();
            if (value.size() >= 2 && value.front() == '[' && value.back() == ']')
                value = value.substr(1, value.size() - 2);
        }
        params.emplace_back(name, value);
    }
    return params;
}

}  // namespace

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
    CLI::App app{"feynpath: path-integral kernels, lattices, optics and PIMC"};
    app.option_defaults()->always_capture_default()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    app.require_subcommand(0, 1);
    app.fallthrough();  // global options may follow the subcommand
    app.set_version_flag("--version", kVersion);
    app.footer("Any subcommand also accepts --config FILE with key=value lines ('#' comments).");

    unsigned threads = 0;
    std::string format = "csv";
    std::string out_path;
    bool self_test_flag = false;
    app.add_option("--threads", threads, "worker cap (default: FEYNPATH_THREADS or hardware)");
    app.add_option("--format", format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--out", out_path, "output file (default: stdout)");
    app.add_flag("--self-test", self_test_flag, "run the built-in oracle checks");

    std::vector<Command> commands = register_commands(app);
    std::vector<std::string> names;
    for (const auto& c : commands) names.push_back(c.app->get_name());

    try {
        std::vector<std::string> args = expand_config(raw_args, names);
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kDomain;
    }

    if (self_test_flag) {
        bool ok = true;
        for (const auto& line : self_test()) {
            out << (line.pass ? "PASS " : "FAIL ") << line.name << " error=" << format_number(line.error)
                << " tol=" << format_number(line.tolerance) << '\n';
            ok = ok && line.pass;
        }
        return ok ? kOk : kNumerical;
    }

    const Command* chosen = nullptr;
    for (const auto& c : commands)
        if (c.app->parsed()) chosen = &c;
    if (!chosen) {
        err << app.help();
        return kDomain;
    }

    Context ctx;
    ctx.threads = threads > 0 ? threads : default_thread_count();
    try {
        Report report = chosen->execute(ctx);
        report.command = chosen->app->get_name();
        report.params = collect_params(chosen->app);
        std::ostringstream buffer;
        if (format == "json")
            write_json(buffer, report);
        else
            write_csv(buffer, report);
        if (out_path.empty()) {
            out << buffer.str();
        } else {
            std::ofstream file(out_path, std::ios::binary);
            if (!file) throw DomainError("cannot write " + out_path);
            file << buffer.str();
        }
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
        return kDomain;
    } catch (const NumericalError& e) {
        err << "numerical error: " << e.what() << '\n';
        return kNumerical;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kFailure;
    }
    return kOk;
}

}  // namespace feynpath::cli
