// SPDX-FileCopyrightText: 2026 the nhsp authors
// SPDX-License-Identifier: MIT
//
// nhsp — batch driver for the pseudo-spectral elastodynamics toolkit.
//
//   nhsp run <scenario.json>                integrate one scenario, write artifacts
//   nhsp eps-family <scenario.json> --eps 0.25,0.125,0.0625
//                                           mollified-family convergence table
//   nhsp lab <cases.json>                   inequality corpus sweeps, one report per case
//   nhsp inspect <checkpoint.nhsp>          print a checkpoint header
//
// Exit codes: 0 success; 2 configuration error; 3 inadmissible parameters;
// 4 numerical abort (partial artifacts are kept). NHSP_THREADS bounds the
// corpus-sweep thread count.

#include "CLI11.hpp"
#include "json.hpp"

#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "nhsp/io.hpp"
#include "nhsp/scenario.hpp"

namespace {

int cmd_run(const std::string& path) {
    const nhsp::Scenario sc = nhsp::parse_scenario(path);
    const nhsp::RunArtifacts art = nhsp::run_scenario(sc);
    std::cout << "scenario    " << sc.name << "\n"
              << "steps       " << art.steps << " (final t = " << art.final_t << ")\n"
              << "diagnostics " << art.csv_path << "\n"
              << "schema      " << art.schema_path << "\n"
              << "checkpoint  " << art.checkpoint_path << "\n";
    for (const auto& p : art.lab_report_paths) std::cout << "lab report  " << p << "\n";
    if (art.aborted) {
        std::cerr << "nhsp: state became non-finite at t = " << art.final_t
                  << "; partial artifacts kept\n";
        return 4;
    }
    return 0;
}

int cmd_eps_family(const std::string& path, const std::vector<double>& eps) {
    const nhsp::Scenario sc = nhsp::parse_scenario(path);
    const nhsp::EpsFamilyResult res = nhsp::run_eps_family(sc, eps);
    std::cout << "table  " << res.table_path << "\n"
              << "schema " << res.schema_path << "\n";
    std::ifstream table(res.table_path);
    for (std::string line; std::getline(table, line);) std::cout << "  " << line << "\n";
    return 0;
}

// A case-set file is a JSON object {name, output_dir, cases: [...]} where each
// case carries a "check" selector plus the same fields as a scenario's lab
// entries. Reports land in output_dir as <id>.lab.json.
int cmd_lab(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw nhsp::ConfigError("cannot open case-set file '" + path + "'");
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw nhsp::ConfigError("case-set '" + path + "': " + e.what());
    }

    std::string out_dir;
    std::vector<nhsp::LabCaseConfig> cases;
    try {
        out_dir = nhsp::detail::require_key(j, "output_dir", "case set").get<std::string>();
        for (const auto& entry : nhsp::detail::require_key(j, "cases", "case set")) {
            nhsp::LabCaseConfig lc;
            lc.check =
                nhsp::detail::require_key(entry, "check", "lab case").get<std::string>();
            if (lc.check != "interpolation" && lc.check != "commutator" &&
                lc.check != "dispersive")
                throw nhsp::ConfigError("case set: unknown lab check '" + lc.check + "'");
            lc.c = nhsp::detail::parse_case(entry);
            cases.push_back(std::move(lc));
        }
    } catch (const nlohmann::json::exception& e) {
        throw nhsp::ConfigError("case-set '" + path + "': " + e.what());
    }
    if (cases.empty()) throw nhsp::ConfigError("case set: no cases listed");

    std::filesystem::create_directories(out_dir);
    for (const auto& lc : cases) {
        const std::string report = nhsp::detail::run_lab_case(lc, out_dir);
        nlohmann::json rep = nlohmann::json::parse(std::ifstream(report));
        std::cout << lc.c.id << " (" << lc.check << "): max_ratio "
                  << rep.at("max_ratio").dump() << ", refinement_slope "
                  << rep.at("refinement_slope").dump() << " -> " << report << "\n";
    }
    return 0;
}

int cmd_inspect(const std::string& path) {
    const nhsp::CheckpointInfo info = nhsp::inspect_checkpoint(path);
    std::cout << "file        " << path << "\n"
              << "section     "
              << (info.section == "SBND" ? "state bundle (SBND)" : "flow map (LMAP)") << "\n"
              << "dim         " << info.dim << "\n"
              << "n           " << info.n << "\n"
              << "period      " << nhsp::detail::fmt_g(info.L) << "\n"
              << "space       "
              << (info.tag == nhsp::SpaceTag::euler ? "eulerian" : "lagrangian") << "\n"
              << "components  " << info.components << "\n"
              << "t           " << nhsp::detail::fmt_g(info.t) << "\n"
              << "A           [";
    for (std::size_t i = 0; i < info.A.size(); ++i)
        std::cout << (i ? ", " : "") << nhsp::detail::fmt_g(info.A[i]);
    std::cout << "]\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"pseudo-spectral elastodynamics driver"};
    app.require_subcommand(1);
    app.footer("Exit codes: 0 ok, 2 config error, 3 inadmissible parameters, 4 numerical "
               "abort (partial artifacts kept). NHSP_THREADS bounds sweep parallelism.");

    std::string scenario_path, caseset_path, checkpoint_path;
    std::vector<double> eps_list;

    CLI::App* run = app.add_subcommand("run", "integrate one scenario and write artifacts");
    run->add_option("scenario", scenario_path, "scenario JSON file")->required();

    CLI::App* eps = app.add_subcommand(
        "eps-family", "run a decreasing mollifier family and tabulate H^s distances");
    eps->add_option("scenario", scenario_path, "scenario JSON file")->required();
    eps->add_option("--eps", eps_list, "comma-separated decreasing mollifier parameters")
        ->required()
        ->delimiter(',');

    CLI::App* lab = app.add_subcommand("lab", "run inequality corpus sweeps from a case set");
    lab->add_option("cases", caseset_path, "case-set JSON file")->required();

    CLI::App* inspect = app.add_subcommand("inspect", "print a checkpoint header");
    inspect->add_option("checkpoint", checkpoint_path, "checkpoint file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return cmd_run(scenario_path);
        if (eps->parsed()) return cmd_eps_family(scenario_path, eps_list);
        if (lab->parsed()) return cmd_lab(caseset_path);
        return cmd_inspect(checkpoint_path);
    } catch (const nhsp::ConfigError& e) {
        std::cerr << "nhsp: " << e.what() << "\n";
        return 2;
    } catch (const nhsp::CheckpointError& e) {
        std::cerr << "nhsp: " << e.what() << "\n";
        return 2;
    } catch (const nhsp::InadmissibleParameters& e) {
        std::cerr << "nhsp: " << e.what() << "\n";
        return 3;
    } catch (const nhsp::NonFinite& e) {
        std::cerr << "nhsp: " << e.what() << " (partial artifacts kept)\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "nhsp: " << e.what() << "\n";
        return 1;
    }
}
