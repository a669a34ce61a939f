#include "lorcap/experiment.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <map>

using lorcap::json;

namespace {

// Flag text as a JSON scalar: numbers stay numbers, everything else ("3/2", "inf", "2..10") is a string.
json scalar(const std::string& text) {
    try {
        std::size_t used = 0;
        double v = std::stod(text, &used);
        if (used == text.size() && std::isfinite(v)) {
            if (text.find_first_of(".eE") == std::string::npos) return json(std::stoll(text));
            return json(v);
        }
    } catch (const std::exception&) {
    }
    return json(text);
}

struct Common {
    std::string output;
    std::uint64_t seed = 0;
    int max_iterations = 20000;
    int scan_limit = 2000;
};

void add_common(CLI::App* app, Common& c) {
    app->add_option("-o,--output", c.output, "artifact path (JSON or CSV); prints only when omitted");
    app->add_option("--seed", c.seed, "RNG seed");
    app->add_option("--max-iterations", c.max_iterations, "solver iteration budget")->check(CLI::PositiveNumber);
    app->add_option("--scan-limit", c.scan_limit, "pipeline scan budget")->check(CLI::PositiveNumber);
}

// Registers string flags that are copied verbatim into params.
struct Flags {
    std::map<std::string, std::string> values;
    std::map<std::string, std::string> flag_of;
    std::map<std::string, bool> switches;

    CLI::Option* option(CLI::App* app, const std::string& name, const std::string& help, std::string flag = "") {
        if (flag.empty()) flag = name;
        flag_of[name] = "--" + flag;
        return app->add_option("--" + flag, values[name], help);
    }
    void flag(CLI::App* app, const std::string& name, const std::string& help) {
        app->add_flag("--" + name, switches[name], help);
    }
    json params(const CLI::App* app) const {
        json p = json::object();
        for (const auto& [name, value] : values) {
            if (app->count(flag_of.at(name)) > 0) p[name] = scalar(value);
        }
        for (const auto& [name, on] : switches) {
            if (on) p[name] = true;
        }
        return p;
    }
};

int emit(const lorcap::RunOutcome& out) {
    std::cout << out.printed;
    if (out.exit_code == lorcap::kExitInvariantViolation) {
        std::cerr << "invariant violation:";
        for (auto it = out.invariants.begin(); it != out.invariants.end(); ++it) {
            if (!it.value().get<bool>()) std::cerr << ' ' << it.key();
        }
        std::cerr << '\n';
    }
    return out.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Lorentz capacity and Cantor-set experiments"};
    app.require_subcommand(1);

    std::map<std::string, std::pair<Flags, Common>> commands;
    std::map<std::string, CLI::App*> subs;
    auto command = [&](const std::string& name, const std::string& help) {
        CLI::App* sub = app.add_subcommand(name, help);
        add_common(sub, commands[name].second);
        subs[name] = sub;
        return std::pair<CLI::App*, Flags*>{sub, &commands[name].first};
    };

    {
        auto [sub, f] = command("norm", "Lorentz norm of a step profile");
        f->option(sub, "profile_file", "profile JSON file", "profile")->required();
        f->option(sub, "p", "integrability exponent p > 1");
        f->option(sub, "q", "secondary exponent q >= 1 or inf");
        f->option(sub, "functional", "lorentz | layercake | weak_distribution");
    }
    {
        auto [sub, f] = command("cantor", "frames of the Cantor construction, or locate a point");
        for (const char* k : {"n", "p", "variant", "generations", "depth"}) f->option(sub, k, k);
        f->flag(sub, "axis", "one-dimensional axis projection");
        f->option(sub, "locate", "comma separated point");
    }
    {
        auto [sub, f] = command("testfn", "norm table of the test functions");
        for (const char* k : {"n", "p", "variant", "q", "j"}) f->option(sub, k, k);
        f->flag(sub, "slopes", "also write <output>.slopes.csv");
    }
    {
        auto [sub, f] = command("hausdorff", "covering sums, mass bounds and dimension estimates");
        for (const char* k : {"n", "p", "variant", "d", "k", "mode", "depth", "tol"}) f->option(sub, k, k);
    }
    {
        auto [sub, f] = command("capacity", "discrete capacity minimization");
        f->option(sub, "mode", "minimize | chain | cube_annulus");
        f->option(sub, "problem_file", "problem JSON file", "problem");
        f->option(sub, "minimizer_output", "write the minimizer grid here", "minimizer-output");
        for (const char* k : {"n", "p", "r"}) f->option(sub, k, k);
        f->option(sub, "hs", "comma separated spacings (cube_annulus)");
    }
    {
        auto [sub, f] = command("pipeline", "Orlicz counterexample pipeline");
        for (const char* k : {"n", "p", "variant", "K", "eps"}) f->option(sub, k, k);
        f->option(sub, "young_file", "Young function JSON file", "young");
    }

    std::string config_path;
    CLI::App* run_cmd = app.add_subcommand("run", "run an ExperimentConfig JSON file");
    run_cmd->add_option("--config", config_path, "config file")->required();

    std::vector<std::string> report_inputs;
    std::string report_output;
    CLI::App* report_cmd = app.add_subcommand("report", "consolidate artifacts into a JSON summary");
    report_cmd->add_option("artifacts", report_inputs, "artifact paths");
    report_cmd->add_option("-o,--output", report_output, "summary path; prints when omitted");

    std::uint64_t suite_seed = 0;
    std::string suite_dir = "lorcap-suite";
    CLI::App* suite_cmd = app.add_subcommand("suite", "run the reproduction suite");
    suite_cmd->add_option("--seed", suite_seed, "RNG seed");
    suite_cmd->add_option("--out-dir", suite_dir, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : lorcap::kExitInputError;
    }

    try {
        if (run_cmd->parsed()) {
            return emit(lorcap::run(lorcap::config_from_json(lorcap::read_json_file(config_path))));
        }
        if (report_cmd->parsed()) {
            std::vector<std::filesystem::path> paths(report_inputs.begin(), report_inputs.end());
            lorcap::ReportOutcome r = lorcap::report(paths);
            if (report_output.empty()) {
                std::cout << r.summary.dump(2) << '\n';
            } else {
                lorcap::write_json_file(report_output, r.summary);
            }
            if (r.exit_code != 0) std::cerr << r.summary.value("error", "report failed") << '\n';
            return r.exit_code;
        }
        if (suite_cmd->parsed()) return emit(lorcap::run_suite(suite_seed, suite_dir));

        for (auto& [name, sub] : subs) {
            if (!sub->parsed()) continue;
            const auto& [flags, common] = commands.at(name);
            lorcap::ExperimentConfig c;
            c.command = name;
            c.params = flags.params(sub);
            for (const char* key : {"profile_file", "problem_file", "minimizer_output"}) {
                if (c.params.contains(key)) c.params[key] = flags.values.at(key);
            }
            if (c.params.contains("locate") || c.params.contains("hs")) {
                for (const char* key : {"locate", "hs"}) {
                    if (!c.params.contains(key)) continue;
                    std::string text = c.params[key].is_string() ? c.params[key].get<std::string>()
                                                                 : c.params[key].dump();
                    json arr = json::array();
                    std::size_t start = 0;
                    while (start <= text.size()) {
                        std::size_t comma = text.find(',', start);
                        std::string part = text.substr(start, comma == std::string::npos ? std::string::npos
                                                                                        : comma - start);
                        arr.push_back(scalar(part));
                        if (comma == std::string::npos) break;
                        start = comma + 1;
                    }
                    c.params[key] = arr;
                }
            }
            if (c.params.contains("young_file")) {
                c.params.erase("young_file");
                c.params["young"] = lorcap::read_json_file(flags.values.at("young_file"));
            }
            c.output = common.output;
            c.seed = common.seed;
            c.budgets.max_iterations = common.max_iterations;
            c.budgets.scan_limit = common.scan_limit;
            return emit(lorcap::run(c));
        }
    } catch (const lorcap::ResourceError& e) {
        std::cerr << "budget exceeded: " << e.what() << '\n';
        return lorcap::kExitInputError;
    } catch (const std::invalid_argument& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return lorcap::kExitInputError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return lorcap::kExitInputError;
    }
    return lorcap::kExitOk;
}
