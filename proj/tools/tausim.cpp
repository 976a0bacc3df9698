// Command line front end: deterministic scenario runs, series export, the
// invariant suite, and the scenario registry.
//
// Exit codes: 0 success, 1 validation/usage failure, 2 numerical failure,
// 3 verify failure.

#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "tausim/errors.hpp"
#include "tausim/record.hpp"
#include "tausim/scenario.hpp"
#include "tausim/verify.hpp"
#include "tausim/version.hpp"

namespace {

int cmd_run(const std::string& config_path) {
    const tausim::ScenarioConfig config = tausim::load_config(config_path);
    const tausim::RunRecord record = tausim::run_scenario(config);

    const std::filesystem::path out = tausim::resolve_output_path(config.output_path);
    tausim::export_series(record, out, config.format);

    std::cout << "scenario:  " << record.scenario << "\n"
              << "rows:      " << record.rows.size() << "\n"
              << "output:    " << out.string() << " (" << tausim::to_string(config.format) << ")\n"
              << "version:   " << record.version << "\n";
    if (!record.rng_algorithm.empty()) {
        std::cout << "rng:       " << record.rng_algorithm << "\n"
                  << "seed:      " << record.seed << "\n";
    }
    std::printf("wall time: %.3f s\n", record.wall_seconds);
    return 0;
}

int cmd_verify(bool full) {
    const auto results =
        tausim::verify_all(full ? tausim::VerifyLevel::full : tausim::VerifyLevel::quick);
    tausim::print_report(std::cout, results);
    return tausim::all_passed(results) ? 0 : 3;
}

int cmd_export(const std::string& record_path, const std::string& format_name,
               std::string out_path) {
    const tausim::OutputFormat format = tausim::parse_format(format_name);
    const tausim::RunRecord record = tausim::read_record(record_path);
    if (out_path.empty()) {
        std::filesystem::path p(record_path);
        p.replace_extension(format == tausim::OutputFormat::csv ? ".csv" : ".jsonl");
        out_path = p.string();
    }
    tausim::export_series(record, tausim::resolve_output_path(out_path), format);
    std::cout << out_path << "\n";
    return 0;
}

int cmd_scenarios() {
    for (const auto& info : tausim::scenario_registry()) {
        std::printf("%-26s %s\n", info.name.c_str(), info.description.c_str());
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hamiltonian dynamics with a dynamical internal time: discrete recurrence, "
                 "continuum limit, and a classical time machine coupled to a q-bit"};
    app.set_version_flag("--version", std::string(tausim::version));
    app.require_subcommand(1);

    std::string config_path;
    auto* run = app.add_subcommand("run", "Run a scenario config and export its series");
    run->add_option("config", config_path, "Path to a scenario config file")->required();

    bool full = false;
    auto* verify = app.add_subcommand("verify", "Run the invariant suites of every module");
    verify->add_flag("--full", full, "Include convergence, Jacobian and refinement checks");

    std::string record_path;
    std::string format_name;
    std::string out_path;
    auto* exp = app.add_subcommand("export", "Re-export a recorded series as csv or jsonl");
    exp->add_option("record", record_path, "Previously exported .csv or .jsonl file")->required();
    exp->add_option("--format", format_name, "Target format: csv or jsonl")->required();
    exp->add_option("--out", out_path, "Output path (default: record with new extension)");

    auto* scen = app.add_subcommand("scenarios", "List the scenario registry");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        if (run->parsed()) return cmd_run(config_path);
        if (verify->parsed()) return cmd_verify(full);
        if (exp->parsed()) return cmd_export(record_path, format_name, out_path);
        if (scen->parsed()) return cmd_scenarios();
    } catch (const tausim::validation_error& e) {
        std::cerr << e.what() << "\n";
        return 1;
    } catch (const tausim::numerical_error& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
