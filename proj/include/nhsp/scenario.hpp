// SPDX-FileCopyrightText: 2026 the nhsp authors
// SPDX-License-Identifier: MIT
//
// Scenario orchestration: JSON scenario files (one file = one scenario, with
// an explicitly referenced defaults file — no hidden defaults), solver runs
// with streamed CSV diagnostics plus a sidecar schema documenting every
// column, final-state checkpoints, inequality-lab sweeps, and the mollifier
// continuous-dependence family. All artifacts are deterministic functions of
// the scenario content: identical scenario + seed gives byte-identical files.

#ifndef NHSP_SCENARIO_HPP
#define NHSP_SCENARIO_HPP

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "nhsp/dynamics.hpp"
#include "nhsp/errors.hpp"
#include "nhsp/io.hpp"
#include "nhsp/lab.hpp"
#include "nhsp/vorticity.hpp"

namespace nhsp {

// Which norms the diagnostics stream records, beyond the always-on energy,
// compatibility, divergence, and sup columns.
struct DiagnosticsSpec {
    int every = 10;                        // steps between records
    std::vector<double> sobolev_s = {2.0}; // one H^s column of V per entry
    double besov_r = 0.25;                 // vorticity Besov column
    double besov_p = p_infinity;
};

struct LabCaseConfig {
    std::string check;  // "interpolation" | "commutator" | "dispersive"
    InequalityCase c;
};

struct Scenario {
    std::string name;
    int dim = 2;
    int n = 32;
    double period = 2.0 * M_PI;
    InitialDataSpec initial;
    EvolutionConfig evolution;
    DiagnosticsSpec diagnostics;
    std::vector<LabCaseConfig> lab;
    std::string output_dir;
};

// ----------------------------------------------------------------- parsing

namespace detail {

inline const nlohmann::json& require_key(const nlohmann::json& j, const char* key,
                                         const char* where) {
    if (!j.contains(key))
        throw ConfigError(std::string("scenario: missing key '") + key + "' in " + where);
    return j.at(key);
}

inline double parse_p_value(const nlohmann::json& v, const char* where) {
    if (v.is_string()) {
        if (v.get<std::string>() == "inf") return p_infinity;
        throw ConfigError(std::string("scenario: p must be a number or \"inf\" in ") + where);
    }
    if (!v.is_number())
        throw ConfigError(std::string("scenario: p must be a number or \"inf\" in ") + where);
    return v.get<double>();
}

inline InitialDataSpec::Kind parse_initial_kind(const std::string& s) {
    if (s == "zero") return InitialDataSpec::Kind::zero;
    if (s == "taylor_green") return InitialDataSpec::Kind::taylor_green;
    if (s == "random") return InitialDataSpec::Kind::random;
    if (s == "shear") return InitialDataSpec::Kind::shear;
    throw ConfigError("scenario: unknown initial kind '" + s + "'");
}

inline CorpusSpec::Kind parse_corpus_kind(const std::string& s) {
    if (s == "random") return CorpusSpec::Kind::random;
    if (s == "single_mode") return CorpusSpec::Kind::single_mode;
    if (s == "shear") return CorpusSpec::Kind::shear;
    if (s == "bump") return CorpusSpec::Kind::bump;
    throw ConfigError("scenario: unknown corpus kind '" + s + "'");
}

inline InequalityCase parse_case(const nlohmann::json& j) {
    InequalityCase c;
    c.id = require_key(j, "id", "lab case").get<std::string>();
    c.d = require_key(j, "d", "lab case").get<int>();
    c.r = require_key(j, "r", "lab case").get<double>();
    c.p = parse_p_value(require_key(j, "p", "lab case"), "lab case");
    c.theta = require_key(j, "theta", "lab case").get<double>();
    c.form = require_key(j, "form", "lab case").get<int>();
    const nlohmann::json& co = require_key(j, "corpus", "lab case");
    c.corpus.kind = parse_corpus_kind(require_key(co, "kind", "corpus").get<std::string>());
    c.corpus.n = require_key(co, "n", "corpus").get<int>();
    c.corpus.samples = require_key(co, "samples", "corpus").get<int>();
    c.corpus.seed = require_key(co, "seed", "corpus").get<std::uint64_t>();
    c.corpus.slope = require_key(co, "slope", "corpus").get<double>();
    c.corpus.band_lo = require_key(co, "band_lo", "corpus").get<double>();
    c.corpus.band_hi = require_key(co, "band_hi", "corpus").get<double>();
    c.corpus.amplitude = require_key(co, "amplitude", "corpus").get<double>();
    if (co.contains("period")) c.corpus.period = co.at("period").get<double>();
    if (j.contains("horizons")) c.horizons = j.at("horizons").get<std::vector<double>>();
    if (j.contains("samples_per_unit_time"))
        c.samples_per_unit_time = j.at("samples_per_unit_time").get<int>();
    if (j.contains("forcing_amplitude"))
        c.forcing_amplitude = j.at("forcing_amplitude").get<double>();
    return c;
}

inline Scenario scenario_from_json(const nlohmann::json& j) {
    Scenario sc;
    sc.name = require_key(j, "name", "scenario").get<std::string>();
    sc.output_dir = require_key(j, "output_dir", "scenario").get<std::string>();

    const nlohmann::json& grid = require_key(j, "grid", "scenario");
    sc.dim = require_key(grid, "dim", "grid").get<int>();
    sc.n = require_key(grid, "n", "grid").get<int>();
    sc.period = require_key(grid, "period", "grid").get<double>();

    const nlohmann::json& in = require_key(j, "initial", "scenario");
    sc.initial.kind = parse_initial_kind(require_key(in, "kind", "initial").get<std::string>());
    sc.initial.seed = require_key(in, "seed", "initial").get<std::uint64_t>();
    sc.initial.slope = require_key(in, "slope", "initial").get<double>();
    sc.initial.band_lo = require_key(in, "band_lo", "initial").get<double>();
    sc.initial.band_hi = require_key(in, "band_hi", "initial").get<double>();
    sc.initial.amplitude_v = require_key(in, "amplitude_v", "initial").get<double>();
    sc.initial.amplitude_u = require_key(in, "amplitude_u", "initial").get<double>();
    sc.initial.shear_amp = require_key(in, "shear_amp", "initial").get<double>();
    sc.initial.eps = require_key(in, "eps", "initial").get<double>();
    sc.initial.A = require_key(in, "A", "initial").get<std::vector<double>>();

    const nlohmann::json& ev = require_key(j, "evolution", "scenario");
    sc.evolution.eps = require_key(ev, "eps", "evolution").get<double>();
    sc.evolution.dt = require_key(ev, "dt", "evolution").get<double>();
    sc.evolution.t_end = require_key(ev, "t_end", "evolution").get<double>();
    sc.evolution.dealias_products =
        require_key(ev, "dealias_products", "evolution").get<bool>();
    sc.evolution.c_cfl = require_key(ev, "c_cfl", "evolution").get<double>();
    sc.evolution.sup_abort = require_key(ev, "sup_abort", "evolution").get<double>();
    sc.evolution.linear_only = require_key(ev, "linear_only", "evolution").get<bool>();
    sc.evolution.check_invariants =
        require_key(ev, "check_invariants", "evolution").get<bool>();

    const nlohmann::json& di = require_key(j, "diagnostics", "scenario");
    sc.diagnostics.every = require_key(di, "every", "diagnostics").get<int>();
    sc.diagnostics.sobolev_s =
        require_key(di, "sobolev_s", "diagnostics").get<std::vector<double>>();
    sc.diagnostics.besov_r = require_key(di, "besov_r", "diagnostics").get<double>();
    sc.diagnostics.besov_p =
        parse_p_value(require_key(di, "besov_p", "diagnostics"), "diagnostics");

    if (j.contains("lab")) {
        for (const auto& entry : j.at("lab")) {
            LabCaseConfig lc;
            lc.check = require_key(entry, "check", "lab case").get<std::string>();
            if (lc.check != "interpolation" && lc.check != "commutator" &&
                lc.check != "dispersive")
                throw ConfigError("scenario: unknown lab check '" + lc.check + "'");
            lc.c = parse_case(entry);
            sc.lab.push_back(std::move(lc));
        }
    }

    // Admissibility gate before any compute: the diagnostics norm parameters
    // must sit inside the estimate windows; basic run parameters must be sane.
    param_check(sc.dim, sc.diagnostics.besov_r, sc.diagnostics.besov_p);
    if (!(sc.evolution.eps > 0))
        throw InadmissibleParameters("scenario: evolution eps must be positive");
    if (!(sc.evolution.dt > 0) || !(sc.evolution.t_end >= 0))
        throw InadmissibleParameters("scenario: dt must be positive and t_end nonnegative");
    if (sc.diagnostics.every < 1)
        throw InadmissibleParameters("scenario: diagnostics every must be >= 1");
    return sc;
}

} // namespace detail

// Parse a scenario file. A top-level "defaults" key names another JSON file
// (relative to the scenario's directory) whose content is merged underneath:
// scenario keys win, objects merge recursively. Every required key must be
// present after the merge — nothing is defaulted silently.
inline Scenario parse_scenario(const std::string& path) {
    namespace fs = std::filesystem;
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open scenario file '" + path + "'");
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("scenario '" + path + "': " + e.what());
    }
    if (j.contains("defaults")) {
        const fs::path base = fs::path(path).parent_path();
        const std::string def_name = j.at("defaults").get<std::string>();
        std::ifstream def_in(base / def_name);
        if (!def_in)
            throw ConfigError("cannot open defaults file '" + (base / def_name).string() + "'");
        nlohmann::json merged;
        try {
            merged = nlohmann::json::parse(def_in);
        } catch (const nlohmann::json::exception& e) {
            throw ConfigError("defaults '" + def_name + "': " + e.what());
        }
        j.erase("defaults");
        merged.merge_patch(j);
        j = std::move(merged);
    }
    try {
        return detail::scenario_from_json(j);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("scenario '" + path + "': " + e.what());
    }
}

// ----------------------------------------------------------------- running

struct RunArtifacts {
    std::string csv_path;
    std::string schema_path;
    std::string checkpoint_path;
    std::vector<std::string> lab_report_paths;
    int steps = 0;
    double final_t = 0;
    bool aborted = false;  // NonFinite stop; partial artifacts were kept
};

namespace detail {

inline std::string fmt_g(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline std::string besov_omega_column(const StateBundle& s, double r, double p) {
    const VorticityBundle W = curl(s);
    std::vector<const SpectralField*> ptrs;
    for (const auto& f : W.omega) ptrs.push_back(&f);
    for (const auto& col : W.omega_a)
        for (const auto& f : col) ptrs.push_back(&f);
    return fmt_g(collection_norm(ptrs, NormRequest::hom_besov(r, p, p)));
}

inline void write_diagnostics_schema(const std::string& path, const DiagnosticsSpec& d) {
    nlohmann::json schema;
    auto col = [&schema](const std::string& name, const std::string& def) {
        schema["columns"].push_back({{"name", name}, {"definition", def}});
    };
    col("t", "simulation time");
    col("energy", "(1/2)(|v|_{L2}^2 + sum_a |u_a|_{L2}^2)");
    col("q_ab", "max over pairs a<b of |u_a.grad u_b - u_b.grad u_a|_{L2}");
    col("div_res", "max spectral divergence residual over v and all u_a");
    col("sup_gradV", "max over components of |grad .|_inf over v and all u_a");
    for (double s : d.sobolev_s)
        col("Hs_" + fmt_g(s), "max over components of the inhomogeneous H^s norm, s = " +
                                  fmt_g(s));
    col("besov_omega", "vorticity bundle seminorm: max over entries of the homogeneous "
                       "Besov (r=" + fmt_g(d.besov_r) + ", p=q=" +
                       (std::isinf(d.besov_p) ? std::string("inf") : fmt_g(d.besov_p)) +
                       ") norm");
    schema["units"] = "dimensionless lattice norms under the L^dim volume normalization";
    std::ofstream out(path, std::ios::trunc);
    out << schema.dump(2) << "\n";
}

inline void emit_row(std::ofstream& csv, const StateBundle& state, const DiagnosticsSpec& d) {
    const DiagnosticsRecord rec = monitor(state, d.sobolev_s);
    csv << fmt_g(rec.t) << ',' << fmt_g(rec.compat.energy) << ',' << fmt_g(rec.compat.q_max)
        << ',' << fmt_g(rec.compat.div_residual) << ',' << fmt_g(rec.grad_sup_V);
    for (double h : rec.hs) csv << ',' << fmt_g(h);
    csv << ',' << besov_omega_column(state, d.besov_r, d.besov_p) << '\n';
}

inline std::string run_lab_case(const LabCaseConfig& lc, const std::string& dir) {
    RatioReport rep;
    if (lc.check == "interpolation")
        rep = check_riesz_interpolation(lc.c);
    else if (lc.check == "commutator")
        rep = check_kato_ponce(lc.c);
    else
        rep = check_strichartz(lc.c);
    const std::string path = dir + "/" + lc.c.id + ".lab.json";
    std::ofstream out(path, std::ios::trunc);
    out << rep.to_json() << "\n";
    return path;
}

} // namespace detail

inline RunArtifacts run_scenario(const Scenario& sc) {
    namespace fs = std::filesystem;
    fs::create_directories(sc.output_dir);
    const Grid g = make_grid(sc.dim, sc.n, sc.period);
    StateBundle state = make_initial_data(g, sc.initial);

    RunArtifacts art;
    art.csv_path = sc.output_dir + "/" + sc.name + ".diagnostics.csv";
    art.schema_path = sc.output_dir + "/" + sc.name + ".diagnostics.schema.json";
    art.checkpoint_path = sc.output_dir + "/" + sc.name + ".state.nhsp";

    detail::write_diagnostics_schema(art.schema_path, sc.diagnostics);
    std::ofstream csv(art.csv_path, std::ios::trunc);
    csv << "t,energy,q_ab,div_res,sup_gradV";
    for (double s : sc.diagnostics.sobolev_s) csv << ",Hs_" << detail::fmt_g(s);
    csv << ",besov_omega\n";
    detail::emit_row(csv, state, sc.diagnostics);

    const long total = std::lround(sc.evolution.t_end / sc.evolution.dt);
    for (long k = 0; k < total; ++k) {
        try {
            state = step(state, sc.evolution);
        } catch (const NonFinite&) {
            art.aborted = true;  // keep the rows written so far + last state
            break;
        }
        ++art.steps;
        if (art.steps % sc.diagnostics.every == 0 || k + 1 == total)
            detail::emit_row(csv, state, sc.diagnostics);
    }
    art.final_t = state.t;
    csv.close();
    write_checkpoint(art.checkpoint_path, state);

    for (const auto& lc : sc.lab)
        art.lab_report_paths.push_back(detail::run_lab_case(lc, sc.output_dir));
    return art;
}

// ------------------------------------------- mollifier continuous dependence

struct EpsFamilyResult {
    std::vector<double> eps;                       // family parameters, decreasing
    std::vector<double> s_values;                  // H^s exponents, one column each
    std::vector<std::vector<double>> sup_distance; // [pair][s]: sup_t over shared samples
    std::string table_path;
    std::string schema_path;
};

namespace detail {

inline double state_hs_distance(const StateBundle& a, const StateBundle& b, double s) {
    const NormRequest req = NormRequest::sobolev(s);
    double acc = 0;
    auto add = [&](const SpectralField& x, const SpectralField& y) {
        SpectralField d = x;
        axpy(d, -1.0, y);
        const double n = norm(d, req);
        acc += n * n;
    };
    for (int i = 0; i < a.dim(); ++i) add(a.v.comp[i], b.v.comp[i]);
    for (int col = 0; col < a.dim(); ++col)
        for (int i = 0; i < a.dim(); ++i) add(a.u[col].comp[i], b.u[col].comp[i]);
    return std::sqrt(acc);
}

} // namespace detail

// Runs the scenario once per family member with both the initial data and the
// evolution mollified at that member's ε, then tabulates, for each adjacent
// pair, sup over shared sample times of the full-state H^s distance.
inline EpsFamilyResult run_eps_family(const Scenario& sc, const std::vector<double>& eps_list) {
    if (eps_list.size() < 3)
        throw InadmissibleParameters("eps family: need at least 3 values");
    for (std::size_t i = 1; i < eps_list.size(); ++i)
        if (!(eps_list[i] < eps_list[i - 1]) || !(eps_list[i] > 0))
            throw InadmissibleParameters("eps family: values must be positive and decreasing");

    namespace fs = std::filesystem;
    fs::create_directories(sc.output_dir);
    const Grid g = make_grid(sc.dim, sc.n, sc.period);
    const long total = std::lround(sc.evolution.t_end / sc.evolution.dt);

    EpsFamilyResult res;
    res.eps = eps_list;
    res.s_values = sc.diagnostics.sobolev_s;

    auto run_member = [&](double eps) {
        InitialDataSpec ini = sc.initial;
        ini.eps = eps;
        EvolutionConfig ev = sc.evolution;
        ev.eps = eps;
        StateBundle state = make_initial_data(g, ini);
        std::vector<StateBundle> snaps;
        snaps.push_back(state);
        for (long k = 0; k < total; ++k) {
            state = step(state, ev);
            if ((k + 1) % sc.diagnostics.every == 0 || k + 1 == total)
                snaps.push_back(state);
        }
        return snaps;
    };

    std::vector<StateBundle> prev = run_member(eps_list[0]);
    for (std::size_t m = 1; m < eps_list.size(); ++m) {
        std::vector<StateBundle> cur = run_member(eps_list[m]);
        std::vector<double> sup(res.s_values.size(), 0.0);
        for (std::size_t j = 0; j < prev.size() && j < cur.size(); ++j)
            for (std::size_t si = 0; si < res.s_values.size(); ++si)
                sup[si] = std::max(
                    sup[si], detail::state_hs_distance(prev[j], cur[j], res.s_values[si]));
        res.sup_distance.push_back(std::move(sup));
        prev = std::move(cur);
    }

    res.table_path = sc.output_dir + "/" + sc.name + ".eps_family.csv";
    res.schema_path = sc.output_dir + "/" + sc.name + ".eps_family.schema.json";
    {
        std::ofstream out(res.table_path, std::ios::trunc);
        out << "eps_coarse,eps_fine";
        for (double s : res.s_values) out << ",sup_dist_Hs_" << detail::fmt_g(s);
        out << "\n";
        for (std::size_t m = 0; m + 1 < eps_list.size(); ++m) {
            out << detail::fmt_g(eps_list[m]) << ',' << detail::fmt_g(eps_list[m + 1]);
            for (double v : res.sup_distance[m]) out << ',' << detail::fmt_g(v);
            out << "\n";
        }
    }
    {
        nlohmann::json schema;
        schema["columns"].push_back(
            {{"name", "eps_coarse"}, {"definition", "larger mollifier parameter of the pair"}});
        schema["columns"].push_back(
            {{"name", "eps_fine"}, {"definition", "smaller mollifier parameter of the pair"}});
        for (double s : res.s_values)
            schema["columns"].push_back(
                {{"name", "sup_dist_Hs_" + detail::fmt_g(s)},
                 {"definition",
                  "sup over shared sample times of the component-l2 combined H^s distance "
                  "between the two members' full states, s = " + detail::fmt_g(s)}});
        std::ofstream out(res.schema_path, std::ios::trunc);
        out << schema.dump(2) << "\n";
    }
    return res;
}

} // namespace nhsp

#endif // NHSP_SCENARIO_HPP
