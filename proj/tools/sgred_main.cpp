// Command-line front end: runs the verification suites and emits
// machine-readable reports.  Exit codes: 0 pass, 1 config error, 2 indicial
// root finding, 3 integration, 4 guard/constraint violation, 5 residual
// failure.

#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "sgred/acceptance.hpp"
#include "sgred/integrator.hpp"
#include "sgred/reductions.hpp"
#include "sgred/reduced_systems.hpp"
#include "sgred/sg2d.hpp"
#include "sgred/transcendents.hpp"

using json = nlohmann::json;
using namespace sgred;

namespace {

int exit_code_for(const Error& e) {
    switch (e.code()) {
        case errc::config_error: return 1;
        case errc::root_finding_failure: return 2;
        case errc::step_size_underflow:
        case errc::tolerance_not_met: return 3;
        default: return 4;
    }
}

// ---------------------------------------------------------------------------
// Config parsing (schema: docs/config-schema.json)

json load_config(const std::string& path) {
    if (path.empty()) return json::object();
    std::ifstream in(path);
    require(in.good(), errc::config_error, "cannot open config file '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        fail(errc::config_error, std::string("config is not valid JSON: ") + e.what());
    }
    require(j.is_object(), errc::config_error, "config root must be an object");
    return j;
}

bool is_complex(const json& j) {
    return j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number();
}

Cx as_complex(const json& j, const std::string& what) {
    require(is_complex(j), errc::config_error, what + " must be a two-element [re, im] array");
    return Cx(j[0].get<double>(), j[1].get<double>());
}

Cx get_complex(const json& j, const std::string& key, Cx fallback) {
    if (!j.contains(key)) return fallback;
    return as_complex(j.at(key), "'" + key + "'");
}

json complex_out(Cx z) { return json::array({z.real(), z.imag()}); }

ReducedConstants parse_constants(const json& cfg) {
    ReducedConstants c;
    c.nu = get_complex(cfg, "nu", Cx{1.0, 0.0});
    c.k = get_complex(cfg, "k", Cx{1.0, 0.0});
    if (cfg.contains("constants")) {
        const json& kk = cfg.at("constants");
        require(kk.is_object(), errc::config_error, "'constants' must be an object");
        c.K2 = get_complex(kk, "K2", Cx{});
        c.K4 = get_complex(kk, "K4", Cx{});
        c.K5 = get_complex(kk, "K5", Cx{});
        c.K6 = get_complex(kk, "K6", Cx{});
        c.K7 = get_complex(kk, "K7", Cx{});
    }
    return c;
}

Poly parse_poly(const json& j, const std::string& what) {
    require(j.is_array(), errc::config_error, what + " must be an array of [re, im] coefficients");
    std::vector<Cx> coeffs;
    for (const auto& c : j) coeffs.push_back(as_complex(c, what + " coefficient"));
    require(coeffs.size() <= 9, errc::config_error, what + " degree bound is 8");
    return Poly(std::move(coeffs));
}

TimeFunctions parse_time_functions(const json& cfg) {
    TimeFunctions tf;
    if (!cfg.contains("time_functions")) return tf;
    const json& j = cfg.at("time_functions");
    require(j.is_object(), errc::config_error, "'time_functions' must be an object");
    for (auto it = j.begin(); it != j.end(); ++it)
        tf.fn[it.key()] = parse_poly(it.value(), "time function '" + it.key() + "'");
    return tf;
}

ReducedState parse_state(const json& j, const std::string& what) {
    require(j.is_object(), errc::config_error, what + " must be an object");
    ReducedState s;
    s.xi = get_complex(j, "xi", Cx{});
    s.up = get_complex(j, "up", Cx{});
    s.upp = get_complex(j, "upp", Cx{});
    s.vp = get_complex(j, "vp", Cx{});
    s.vpp = get_complex(j, "vpp", Cx{});
    return s;
}

std::vector<Cx> parse_path(const json& cfg) {
    require(cfg.contains("path"), errc::config_error, "'path' (waypoint list) is required");
    const json& j = cfg.at("path");
    require(j.is_array() && j.size() >= 2, errc::config_error,
            "'path' must list at least two [re, im] waypoints");
    std::vector<Cx> wps;
    for (const auto& w : j) wps.push_back(as_complex(w, "waypoint"));
    return wps;
}

void emit(const json& report, const std::string& out) {
    std::string text = report.dump(2) + "\n";
    if (out.empty()) {
        std::cout << text;
    } else {
        std::ofstream f(out);
        require(f.good(), errc::config_error, "cannot open output file '" + out + "'");
        f << text;
    }
}

std::string csv_num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// ---------------------------------------------------------------------------
// Subcommands

int cmd_fuchs(const json& cfg, const std::string& out, bool timestamp) {
    Cx nu = get_complex(cfg, "nu", Cx{1.0, 0.0});
    std::vector<Cx> idx = fuchs_indices(nu);
    double worst = 0.0;
    for (Cx r : idx) {
        Cx det = indicial_det(r, nu);
        worst = std::max(worst, std::abs(det));
    }
    json report;
    report["command"] = "fuchs";
    report["nu"] = complex_out(nu);
    json list = json::array();
    for (Cx r : idx) list.push_back(complex_out(r));
    report["indices"] = list;
    report["max_root_residual"] = {{"value", worst}, {"tol", 1e-9}};
    report["pass"] = worst < 1e-9;
    if (timestamp) report["timestamp"] = static_cast<long>(::time(nullptr));
    emit(report, out);
    return report["pass"].get<bool>() ? 0 : 2;
}

int cmd_integrate(const json& cfg, const std::string& out, const std::string& format,
                  double tol_flag, bool timestamp) {
    require(cfg.contains("case"), errc::config_error, "'case' (tri|rat|exp|zer) is required");
    ReducedCase cs = case_from_name(cfg.at("case").get<std::string>());
    ReducedConstants c = parse_constants(cfg);
    require(cfg.contains("initial_state"), errc::config_error, "'initial_state' is required");
    ReducedState s0 = parse_state(cfg.at("initial_state"), "'initial_state'");
    std::vector<Cx> wps = parse_path(cfg);
    double tol = tol_flag > 0 ? tol_flag : cfg.value("tol", 1e-10);

    std::vector<Cx> poles = case_fixed_singularities(cs, c, wps);
    ComplexPath path(wps, poles);
    Trajectory tr = integrate_reduced(cs, c, s0, path, tol);

    if (format == "csv") {
        std::string text =
            "s,xi_re,xi_im,up_re,up_im,upp_re,upp_im,vp_re,vp_im,vpp_re,vpp_im,"
            "K2_re,K2_im,K4_re,K4_im,drift2,drift4\n";
        for (const auto& smp : tr.samples()) {
            const auto& st = smp.state;
            text += csv_num(smp.s) + "," + csv_num(st.xi.real()) + "," + csv_num(st.xi.imag()) +
                    "," + csv_num(st.up.real()) + "," + csv_num(st.up.imag()) + "," +
                    csv_num(st.upp.real()) + "," + csv_num(st.upp.imag()) + "," +
                    csv_num(st.vp.real()) + "," + csv_num(st.vp.imag()) + "," +
                    csv_num(st.vpp.real()) + "," + csv_num(st.vpp.imag()) + "," +
                    csv_num(smp.K2.real()) + "," + csv_num(smp.K2.imag()) + "," +
                    csv_num(smp.K4.real()) + "," + csv_num(smp.K4.imag()) + "," +
                    csv_num(smp.drift2) + "," + csv_num(smp.drift4) + "\n";
        }
        if (out.empty()) {
            std::cout << text;
        } else {
            std::ofstream f(out);
            require(f.good(), errc::config_error, "cannot open output file '" + out + "'");
            f << text;
        }
        std::cerr << "max drift2 " << tr.max_drift2() << ", max drift4 " << tr.max_drift4()
                  << " (tol " << tol << ")\n";
        return 0;
    }

    json report;
    report["command"] = "integrate";
    report["case"] = case_name(cs);
    report["tol"] = tol;
    json samples = json::array();
    for (const auto& smp : tr.samples()) {
        json row;
        row["s"] = smp.s;
        row["xi"] = complex_out(smp.state.xi);
        row["up"] = complex_out(smp.state.up);
        row["upp"] = complex_out(smp.state.upp);
        row["vp"] = complex_out(smp.state.vp);
        row["vpp"] = complex_out(smp.state.vpp);
        row["K2"] = complex_out(smp.K2);
        row["K4"] = complex_out(smp.K4);
        row["drift2"] = smp.drift2;
        row["drift4"] = smp.drift4;
        samples.push_back(row);
    }
    report["samples"] = samples;
    report["max_drift2"] = {{"value", tr.max_drift2()}, {"tol", 1e-8}};
    report["max_drift4"] = {{"value", tr.max_drift4()}, {"tol", 1e-8}};
    if (timestamp) report["timestamp"] = static_cast<long>(::time(nullptr));
    emit(report, out);
    return 0;
}

int cmd_verify_reduction(const json& cfg, const std::string& out, double tol_flag,
                         std::uint64_t seed, bool timestamp) {
    require(cfg.contains("reduction"), errc::config_error,
            "'reduction' (generic_example|generic_full|rational|exp_k5|exp_k5zero|zer|zer_k5zero)"
            " is required");
    ReductionCaseSpec spec = case_spec_from_name(cfg.at("reduction").get<std::string>());
    ReducedConstants c = parse_constants(cfg);
    TimeFunctions tf = parse_time_functions(cfg);
    BuildOptions opt;
    opt.C1 = get_complex(cfg, "C1", Cx{});
    opt.C2 = get_complex(cfg, "C2", Cx{});
    ReductionVariables rv = build_reduction(spec, tf, c, opt);

    require(cfg.contains("grid"), errc::config_error, "'grid' is required");
    const json& g = cfg.at("grid");
    Cx x0 = get_complex(g, "x0", Cx{1.0, 0.3});
    Cx y0 = get_complex(g, "y0", Cx{2.0, -0.2});
    Cx t0 = get_complex(g, "t0", Cx{0.25, 0.1});
    Cx dx = get_complex(g, "dx", Cx{0.06, 0.01});
    Cx dy = get_complex(g, "dy", Cx{0.07, -0.01});
    Cx dt = get_complex(g, "dt", Cx{0.03, 0.01});
    int nx = g.value("nx", 3), ny = g.value("ny", 3), nt = g.value("nt", 3);

    double adm_tol = tol_flag > 0 ? tol_flag : cfg.value("adm_tol", 1e-9);
    double pde_tol = cfg.value("pde_tol", 1e-7);

    // The trajectory seed state: explicit, or pseudo-random from the seed.
    ReducedState base;
    Cx xi0 = rv.xi(x0, y0, t0).value();
    if (cfg.contains("base_state")) {
        base = parse_state(cfg.at("base_state"), "'base_state'");
        base.xi = xi0;
    } else {
        Rng rng(seed);
        base = ReducedState{xi0, rng.box(0.5), rng.box(0.5), rng.box(0.5), rng.box(0.5)};
    }
    StateProvider sp = make_ode_state_provider(rv, base);

    json points = json::array();
    double worst_pde = 0.0, worst_adm = 0.0;
    reset_branch_warnings();
    for (int i = 0; i < nx; ++i)
        for (int j = 0; j < ny; ++j)
            for (int l = 0; l < nt; ++l) {
                Cx x = x0 + static_cast<double>(i) * dx;
                Cx y = y0 + static_cast<double>(j) * dy;
                Cx t = t0 + static_cast<double>(l) * dt;
                FieldSample s = reconstruct_fields(rv, sp, x, y, t);
                PdeResidual r = pde_residual(s);
                auto adm = admissibility_residuals(rv, x, y, t);
                json row;
                row["x"] = complex_out(x);
                row["y"] = complex_out(y);
                row["t"] = complex_out(t);
                double e1 = std::abs(r.e1) / std::max(r.scale1, 1.0);
                double e2 = std::abs(r.e2) / std::max(r.scale2, 1.0);
                row["E1"] = {{"value", e1}, {"tol", pde_tol}};
                row["E2"] = {{"value", e2}, {"tol", pde_tol}};
                json ar = json::array();
                for (const auto& a : adm) {
                    ar.push_back({{"value", a.rel()}, {"tol", adm_tol}});
                    worst_adm = std::max(worst_adm, a.rel());
                }
                row["admissibility"] = ar;
                points.push_back(row);
                worst_pde = std::max({worst_pde, e1, e2});
            }

    bool pass = worst_pde < pde_tol && worst_adm < adm_tol;
    json report;
    report["command"] = "verify-reduction";
    report["reduction"] = case_spec_name(spec);
    report["constraints"] = rv.constraints();
    report["points"] = points;
    report["max_pde_residual"] = {{"value", worst_pde}, {"tol", pde_tol}};
    report["max_admissibility_residual"] = {{"value", worst_adm}, {"tol", adm_tol}};
    report["branch_warnings"] = branch_warning_count();
    report["pass"] = pass;
    if (timestamp) report["timestamp"] = static_cast<long>(::time(nullptr));
    emit(report, out);
    return pass ? 0 : 5;
}

int cmd_map(const json& cfg, const std::string& out, double tol_flag, bool timestamp) {
    require(cfg.contains("map_case"), errc::config_error, "'map_case' (1..9) is required");
    int case_id = cfg.at("map_case").get<int>();
    ReducedConstants c = parse_constants(cfg);
    bool autonomous = cfg.value("autonomous", false);

    double tol = tol_flag > 0 ? tol_flag : cfg.value("tol", 1e-6);
    json report;
    report["command"] = "map";
    report["map_case"] = case_id;

    bool want_pullback = cfg.value("pullback", false);
    std::optional<ComplexPath> path;
    std::optional<ReducedState> s0;
    if (want_pullback) {
        require(cfg.contains("initial_state"), errc::config_error,
                "'initial_state' is required when pullback is requested");
        s0 = parse_state(cfg.at("initial_state"), "'initial_state'");
        path.emplace(parse_path(cfg));
        // Pullback determines K2, K4 from the state itself.
        MappedODE pre = param_map(case_id, c, autonomous);
        auto [K2v, K4v] = first_integrals(pre.source_case, c, *s0);
        c.K2 = K2v;
        c.K4 = K4v;
    }

    MappedODE m = param_map(case_id, c, autonomous);
    report["source_case"] = case_name(m.source_case);
    if (std::holds_alternative<ChazyParams>(m.target)) {
        const auto& p = std::get<ChazyParams>(m.target);
        report["target"] = {{"equation", chazy_name(p.kind)},
                            {"d1", complex_out(p.d1)},
                            {"d2", complex_out(p.d2)},
                            {"d3", complex_out(p.d3)},
                            {"d4", complex_out(p.d4)}};
    } else if (std::holds_alternative<PainleveParams>(m.target)) {
        const auto& p = std::get<PainleveParams>(m.target);
        report["target"] = {{"equation", painleve_name(p.kind)},
                            {"alpha", complex_out(p.alpha)},
                            {"beta", complex_out(p.beta)},
                            {"gamma", complex_out(p.gamma)},
                            {"delta", complex_out(p.delta)}};
    } else {
        const auto& q = std::get<EllipticQuartic>(m.target);
        report["target"] = {{"equation", "elliptic-quartic"}, {"qd", complex_out(q.qd)},
                            {"q4", complex_out(q.q4)},       {"q2", complex_out(q.q2)},
                            {"q1", complex_out(q.q1)},       {"q0", complex_out(q.q0)}};
    }
    report["branch"] = {{"r", complex_out(m.r)},
                        {"lambda", complex_out(m.lambda)},
                        {"mu", complex_out(m.mu)},
                        {"k0", complex_out(m.k0)},
                        {"note", m.branch_note}};

    int code = 0;
    if (want_pullback) {
        Trajectory tr = integrate_reduced(m.source_case, c, *s0, *path, 1e-12);
        std::vector<PullbackSample> samples;
        int n = static_cast<int>(tr.samples().size());
        for (int i = 0; i < n; i += std::max(1, n / 20)) {
            const auto& smp = tr.samples()[static_cast<std::size_t>(i)];
            auto [uppp, vppp] = reduced_rhs(m.source_case, c, smp.state);
            samples.push_back({smp.state, uppp});
        }
        auto res = pullback_check(m, samples);
        double worst = 0.0, mean = 0.0;
        for (double r : res) {
            worst = std::max(worst, r);
            mean += r;
        }
        mean /= static_cast<double>(res.size());
        report["pullback"] = {{"samples", res.size()},
                              {"max_residual", {{"value", worst}, {"tol", tol}}},
                              {"mean_residual", mean}};
        report["pass"] = worst < tol;
        if (worst >= tol) code = 5;
    }
    if (timestamp) report["timestamp"] = static_cast<long>(::time(nullptr));
    emit(report, out);
    return code;
}

json checks_to_json(const std::vector<CheckResult>& results) {
    json arr = json::array();
    for (const auto& r : results) {
        arr.push_back({{"id", r.id},
                       {"name", r.name},
                       {"pass", r.pass},
                       {"value", r.value},
                       {"tol", r.tol},
                       {"detail", r.detail}});
    }
    return arr;
}

int cmd_suite(const std::string& out, std::uint64_t seed, const std::string& fault,
              bool timestamp) {
    FaultFlags flags;
    if (!fault.empty()) {
        if (fault == "nolog")
            flags.perturb_nolog = true;
        else if (fault == "conservation")
            flags.perturb_conservation = true;
        else if (fault == "indices")
            flags.perturb_indices = true;
        else
            fail(errc::config_error, "unknown fault '" + fault + "'");
    }
    std::vector<CheckResult> results = run_acceptance(seed, flags);
    // Determinism self-check: a fresh run with the same seed must serialise to
    // the same bytes.
    std::string first = checks_to_json(results).dump();
    std::string second = checks_to_json(run_acceptance(seed, flags)).dump();

    json report;
    report["command"] = "suite";
    report["seed"] = seed;
    if (!fault.empty()) report["injected_fault"] = fault;
    report["checks"] = checks_to_json(results);
    report["deterministic_rerun_identical"] = (first == second);
    bool all = first == second;
    for (const auto& r : results) all = all && r.pass;
    report["all_pass"] = all;
    int code = suite_exit_code(results);
    if (code == 0 && first != second) code = 5;
    report["exit_code"] = code;
    if (timestamp) report["timestamp"] = static_cast<long>(::time(nullptr));
    emit(report, out);
    return code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Verification laboratory for the coupled two-dimensional sine-Gordon system "
                 "and its reductions"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path, out_path, format = "json", fault;
    double tol = -1.0;
    std::uint64_t seed = 1;
    bool timestamp = false;
    std::string case_tag;

    app.add_option("--config", config_path,
                   "JSON configuration file (see docs/config-schema.json)");
    app.add_option("--out", out_path, "write the report to this file instead of stdout");
    app.add_option("--format", format, "output format: json or csv")
        ->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--seed", seed, "seed for all pseudo-random samples");
    app.add_option("--tol", tol, "override the primary tolerance of the command");
    app.add_option("--case", case_tag, "reduced case tag (tri|rat|exp|zer), overrides config");
    app.add_flag("--timestamp", timestamp, "include a timestamp field in reports");

    auto* sc_fuchs = app.add_subcommand("fuchs", "Fuchs indices of the indicial equation");
    auto* sc_integrate =
        app.add_subcommand("integrate", "integrate a reduced system along a complex path");
    auto* sc_verify = app.add_subcommand(
        "verify-reduction", "check a closed-form reduction against the PDE and admissibility");
    auto* sc_map = app.add_subcommand("map", "parameter map onto a Painleve/Chazy equation");
    auto* sc_suite = app.add_subcommand("suite", "run the full verification suite");
    sc_suite->add_option("--inject-fault", fault,
                         "perturb one check (nolog|conservation|indices)");

    CLI11_PARSE(app, argc, argv);

    try {
        json cfg = load_config(config_path);
        if (!case_tag.empty()) cfg["case"] = case_tag;
        if (sc_fuchs->parsed()) return cmd_fuchs(cfg, out_path, timestamp);
        if (sc_integrate->parsed()) return cmd_integrate(cfg, out_path, format, tol, timestamp);
        if (sc_verify->parsed()) return cmd_verify_reduction(cfg, out_path, tol, seed, timestamp);
        if (sc_map->parsed()) return cmd_map(cfg, out_path, tol, timestamp);
        if (sc_suite->parsed()) return cmd_suite(out_path, seed, fault, timestamp);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
