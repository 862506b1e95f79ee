// Command-line front end: screen, tune and simulate.
//
// Exit codes: 0 success, 1 user error, 2 data error, 3 internal error.

#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rdcscreen/commands.hpp"

namespace {

using namespace rdcscreen;

enum ExitCode { kOk = 0, kUserError = 1, kDataError = 2, kInternalError = 3 };

std::vector<Method> parse_methods(const std::string& list)
{
    std::vector<Method> methods;
    for (const auto& name : split_list(list)) {
        methods.push_back(parse_method(name));
    }
    if (methods.empty()) {
        throw ParameterError("no screening methods selected");
    }
    return methods;
}

std::array<unsigned, 3> parse_multipliers(const std::string& list)
{
    const auto items = split_list(list);
    if (items.size() != 3) {
        throw ParameterError("--multipliers takes three comma-separated integers, got '" + list + "'");
    }
    std::array<unsigned, 3> out{};
    for (std::size_t k = 0; k < 3; ++k) {
        out[k] = static_cast<unsigned>(std::stoul(items[k]));
    }
    return out;
}

// Fills options that were not given on the command line from a flat
// key = value file, so precedence is CLI > file > defaults.
void apply_config_file(CLI::App& sub, const std::string& path)
{
    for (const auto& [key, value] : read_config_file(path)) {
        CLI::Option* opt = nullptr;
        try {
            opt = sub.get_option("--" + key);
        } catch (const CLI::OptionNotFound&) {
            throw ParameterError("config file " + path + ": unknown key '" + key + "' for '" + sub.get_name() + "'");
        }
        if (opt->count() > 0) {
            continue;
        }
        if (opt->get_type_size() == 0) {
            if (value != "true" && value != "1") {
                continue;
            }
            opt->add_result("true");
        } else {
            opt->add_result(value);
        }
        opt->run_callback();
    }
}

struct Cli {
    RunConfig cfg;
    std::string methods = "rdc";
    std::string response;
    std::string response_file;
    std::string d = "auto";
    std::string multipliers = "1,2,3";
    std::string scenario = "Ia";
    std::string config_path;
    double t = 0.0;
    std::size_t p_for_t = 0;

    void finish(CLI::App& sub)
    {
        cfg.methods = parse_methods(methods);
        cfg.response = split_list(response);
        if (!response_file.empty()) {
            cfg.response_file = response_file;
        }
        if (d != "auto") {
            std::size_t pos = 0;
            const auto value = std::stoul(d, &pos);
            if (pos != d.size() || value == 0) {
                throw ParameterError("--d takes 'auto' or a positive integer, got '" + d + "'");
            }
            cfg.d = value;
        }
        cfg.multipliers = parse_multipliers(multipliers);
        cfg.scenario = parse_scenario(scenario);
        if (sub.get_name() != "tune") {
            return;
        }
        if (sub.count("--t") > 0) {
            cfg.t = t;
        }
        if (sub.count("--p") > 0) {
            cfg.p_for_t = p_for_t;
        }
    }
};

void add_common(CLI::App& sub, Cli& cli)
{
    sub.add_option("--config", cli.config_path, "flat key = value file; command-line flags take precedence");
    sub.add_option("--c-const", cli.cfg.c_const, "constant C in t = C ln p")->capture_default_str();
    sub.add_option("--workers", cli.cfg.workers, "worker threads")->capture_default_str();
    sub.add_option("--output-dir", cli.cfg.output_dir, "directory for output files")->capture_default_str();
    sub.add_flag("--tsv", cli.cfg.tsv, "tab-separated input instead of comma-separated");
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Robust distance correlation feature screening"};
    app.require_subcommand(1);
    Cli cli;

    auto* screen = app.add_subcommand("screen", "rank predictors of a CSV file by marginal dependence");
    add_common(*screen, cli);
    screen->add_option("--input", cli.cfg.input, "CSV with a header row")->required();
    screen->add_option("--response", cli.response, "response column name(s), comma-separated");
    screen->add_option("--response-file", cli.response_file, "separate CSV holding the response column(s)");
    screen->add_option("--methods", cli.methods, "comma list of rdc, dc, pearson")->capture_default_str();
    screen->add_option("--d", cli.d, "retained model size, or 'auto' for floor(n / ln n)")->capture_default_str();
    screen->add_option("--multipliers", cli.multipliers, "model size multipliers m1,m2,m3")->capture_default_str();

    auto* tune = app.add_subcommand("tune", "solve the truncation level of one column");
    add_common(*tune, cli);
    tune->add_option("--input", cli.cfg.input, "CSV with a header row")->required();
    tune->add_option("--column", cli.cfg.column, "column to tune")->required();
    tune->add_option("--response", cli.response, "response column(s), excluded from the default p");
    tune->add_option("--t", cli.t, "use this t instead of C ln p");
    tune->add_option("--p", cli.p_for_t, "p in t = C ln p (default: number of non-response columns)");

    auto* simulate = app.add_subcommand("simulate", "run a heavy-tailed benchmark scenario");
    add_common(*simulate, cli);
    simulate->add_option("--scenario", cli.scenario, "Ia, Ib, IIa, IIb, IIIa or IIIb")->capture_default_str();
    simulate->add_option("--n", cli.cfg.n, "samples per replicate")->capture_default_str();
    simulate->add_option("--p", cli.cfg.p, "predictors per replicate")->capture_default_str();
    simulate->add_option("--rho", cli.cfg.rho, "AR(1) correlation of the predictors")->capture_default_str();
    simulate->add_option("--reps", cli.cfg.reps, "number of replicates B")->capture_default_str();
    simulate->add_option("--seed", cli.cfg.seed, "base seed")->capture_default_str();
    simulate->add_option("--methods", cli.methods, "comma list of rdc, dc, pearson")->capture_default_str();
    simulate->add_option("--d", cli.d, "model size for P1/Pa, or 'auto'")->capture_default_str();
    simulate->add_option("--multipliers", cli.multipliers, "multipliers for d, d1, d2")->capture_default_str();
    simulate->add_flag("--adjacent-ii", cli.cfg.adjacent_ii, "scenario II actives at X1, X2 instead of evenly spaced");
    simulate->add_flag("--dump-data", cli.cfg.dump_data, "write every replicate's data set as CSV");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kOk : kUserError;
    }

    try {
        CLI::App* sub = app.get_subcommands().front();
        if (!cli.config_path.empty()) {
            apply_config_file(*sub, cli.config_path);
        }
        cli.finish(*sub);
        if (sub == screen) {
            cmd_screen(cli.cfg, std::cout);
        } else if (sub == tune) {
            cmd_tune(cli.cfg, std::cout);
        } else {
            cmd_simulate(cli.cfg, std::cout);
        }
    } catch (const ParameterError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUserError;
    } catch (const SizeError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUserError;
    } catch (const CLI::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUserError;
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return kDataError;
    } catch (const std::logic_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUserError;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return kInternalError;
    }
    return kOk;
}
