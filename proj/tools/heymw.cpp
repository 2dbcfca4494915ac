// Command-line front end for the phantom-coupled Einstein-Yang-Mills wormhole solver:
// single-orbit integration, orbit classification, symmetric shooting scans,
// asymmetric-pair searches, full solution builds, a self-check suite and
// plot-data export.

#include "heymw/asym.hpp"
#include "heymw/manifest.hpp"
#include "heymw/oracle.hpp"
#include "heymw/shooting.hpp"
#include "heymw/wormhole.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>

namespace fs = std::filesystem;
using namespace heymw;

namespace {

constexpr const char* kVersion = "heymw 0.1.0";

// exit codes: 0 ok, 2 inadmissible input, 3 bracket failure,
// 4 unconverged asymptotics, 5 internal integration failure
enum ExitCode : int {
    kOk = 0,
    kBadInput = 2,
    kBracketFailure = 3,
    kAsymptoticsUnconverged = 4,
    kIntegrationFailure = 5,
};

std::string fmt17(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fmt12(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12f", v);
    return buf;
}

struct Writer {
    fs::path dir;
    RunManifest manifest;
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();

    explicit Writer(const std::string& out, const std::string& subcommand) : dir(out) {
        fs::create_directories(dir);
        manifest.tool_version = kVersion;
        manifest.subcommand = subcommand;
    }

    void param(const std::string& k, const std::string& v) { manifest.parameters[k] = v; }
    void param(const std::string& k, double v) { manifest.parameters[k] = fmt17(v); }
    void param(const std::string& k, int v) { manifest.parameters[k] = std::to_string(v); }

    void emit(const std::string& name, const std::string& content) {
        const fs::path p = dir / name;
        std::ofstream fout(p, std::ios::binary);
        fout << content;
        fout.close();
        manifest.outputs.push_back({name, checksum_file(p.string())});
    }

    void finish() {
        manifest.wall_time_ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                .count();
        const fs::path p = dir / "manifest.json";
        std::ofstream fout(p, std::ios::binary);
        fout << manifest.render();
        fout.close();
        // stdout carries the manifest summary only
        std::cout << manifest.subcommand << ": ok";
        for (const auto& f : manifest.outputs) std::cout << " " << (dir / f.path).string();
        std::cout << "\n";
    }
};

IntegrationControls make_controls(double rtol, double atol, double rho_max) {
    IntegrationControls c;
    c.rtol = rtol;
    c.atol = atol;
    c.rho_max = rho_max;
    c.validate();
    return c;
}

std::string class_name(const OrbitClass& oc) { return to_string(oc.kind); }

int cmd_integrate(double r0, double w0, double u0, double rtol, double atol, double rho_max,
                  const std::string& out) {
    Writer w(out, "integrate");
    w.param("r0", r0);
    w.param("w0", w0);
    w.param("u0", u0);
    w.param("rtol", rtol);
    w.param("atol", atol);
    w.param("rho_max", rho_max);

    const IntegrationControls c = make_controls(rtol, atol, rho_max);
    const Trajectory t = integrate(initial_state({r0, w0, u0}), c);

    std::string body = "# rho r N w U kappa zeta\n";
    for (const OrbitState& s : t.nodes()) {
        body += fmt17(s.rho);
        for (double v : s.vec()) body += " " + fmt17(v);
        body += "\n";
    }
    w.emit("trajectory.dat", body);
    w.manifest.results["termination"] = to_string(t.termination());
    w.manifest.results["rho_end"] = t.rho_end();
    w.manifest.results["nodes"] = t.nodes().size();
    w.manifest.results["events"] = t.events().size();
    w.finish();
    return kOk;
}

int cmd_classify(double r0, double w0, double u0, double rtol, double atol, double rho_max,
                 const std::string& out) {
    Writer w(out, "classify");
    w.param("r0", r0);
    w.param("w0", w0);
    w.param("u0", u0);
    w.param("rtol", rtol);
    w.param("atol", atol);
    w.param("rho_max", rho_max);

    const OrbitClass oc = classify({r0, w0, u0}, make_controls(rtol, atol, rho_max), {});
    nlohmann::json rec;
    rec["class"] = class_name(oc);
    rec["zeros"] = oc.zeros;
    rec["rho_end"] = oc.diag.rho_end;
    rec["zero_events"] = oc.diag.zero_events;
    rec["zero_winding"] = oc.diag.zero_winding;
    rec["termination"] = to_string(oc.diag.termination);
    rec["w_monotone"] = oc.diag.w_monotone;
    rec["terminal_F"] = oc.diag.F_end;
    rec["terminal_strip"] = oc.diag.strip_end;
    if (!oc.diag.note.empty()) rec["note"] = oc.diag.note;
    w.emit("classify.json", rec.dump(2) + "\n");
    w.manifest.results = rec;
    w.finish();
    return kOk;
}

int cmd_shoot(double r0, const std::string& parity, int n_max, double tol, double rtol,
              double atol, double rho_max, const std::string& out) {
    Writer w(out, "shoot");
    w.param("r0", r0);
    w.param("parity", parity);
    w.param("n_max", n_max);
    w.param("tol", tol);
    w.param("rtol", rtol);
    w.param("atol", atol);
    w.param("rho_max", rho_max);

    const Axis axis = parity == "even" ? Axis::Even : Axis::Odd;
    const auto seq = find_sequence(r0, axis, n_max, tol, make_controls(rtol, atol, rho_max), {});

    std::string body = "# n parameter bracket_lo bracket_hi\n";
    nlohmann::json rows = nlohmann::json::array();
    for (const ShotResult& s : seq) {
        body += std::to_string(s.n) + " " + fmt12(s.value) + " " + fmt12(s.lo) + " " +
                fmt12(s.hi) + "\n";
        nlohmann::json r;
        r["n"] = s.n;
        r["value"] = s.value;
        r["lo"] = s.lo;
        r["hi"] = s.hi;
        r["width"] = s.hi - s.lo;
        r["tol_met"] = (s.hi - s.lo) <= tol;
        r["lo_class"] = class_name(s.lo_class);
        r["lo_zeros"] = s.lo_class.zeros;
        r["hi_class"] = class_name(s.hi_class);
        r["hi_zeros"] = s.hi_class.zeros;
        r["midpoint_class"] = class_name(s.midpoint_class);
        rows.push_back(r);
    }
    w.emit("shoot.dat", body);
    w.manifest.results["sequence"] = rows;
    w.finish();
    return kOk;
}

int cmd_asym(double r0, int n, int m, double tol, int grid, double rtol, double atol,
             double rho_max, const std::string& out) {
    Writer w(out, "asym");
    w.param("r0", r0);
    w.param("n", n);
    w.param("m", m);
    w.param("tol", tol);
    w.param("grid", grid);
    w.param("rtol", rtol);
    w.param("atol", atol);
    w.param("rho_max", rho_max);

    const AsymScan scan =
        find_asym_pairs(r0, n, m, tol, make_controls(rtol, atol, rho_max), {}, grid);
    for (const std::string& d : scan.diagnostics) std::cerr << "asym: " << d << "\n";

    std::string body = "# n m w0 U0\n";
    nlohmann::json rows = nlohmann::json::array();
    for (const AsymPair& p : scan.pairs) {
        body += std::to_string(p.n) + " " + std::to_string(p.m) + " " + fmt12(p.w0) + " " +
                fmt12(p.u0) + "\n";
        rows.push_back({{"n", p.n}, {"m", p.m}, {"w0", p.w0}, {"u0", p.u0}});
    }
    w.emit("asym.dat", body);
    w.manifest.results["pairs"] = rows;
    w.manifest.results["skipped"] = scan.diagnostics;
    w.finish();
    return kOk;
}

std::string solution_table(const WormholeSolution& sol, double window, double step) {
    const double lo = std::max(sol.rho_minus(), -window);
    const double hi = std::min(sol.rho_plus(), window);
    std::string body = "# rho r N w U kappa zeta tau phi m\n";
    for (double rho = lo; rho <= hi + 1e-12; rho += step) {
        const WormholeSolution::Row r = sol.row(std::min(rho, hi));
        const double cols[10] = {r.rho, r.r, r.N, r.w, r.U, r.kappa, r.zeta, r.tau, r.phi, r.m};
        for (int i = 0; i < 10; ++i) body += (i ? " " : "") + fmt17(cols[i]);
        body += "\n";
    }
    return body;
}

int cmd_build(double r0, double w0, double u0, const std::string& normalize_end,
              double phantom_factor, double grid_step, double rtol, double atol, double rho_max,
              const std::string& out) {
    Writer w(out, "build");
    w.param("r0", r0);
    w.param("w0", w0);
    w.param("u0", u0);
    w.param("normalize_end", normalize_end);
    w.param("phantom_factor", phantom_factor);
    w.param("grid_step", grid_step);
    w.param("rtol", rtol);
    w.param("atol", atol);
    w.param("rho_max", rho_max);

    if (!(grid_step > 0.0)) throw std::invalid_argument("build: --grid-step must be positive");
    BuildOptions opts;
    opts.normalize_end = normalize_end == "minus" ? End::Minus : End::Plus;
    opts.phantom_factor = phantom_factor;
    const WormholeSolution sol = build({r0, w0, u0}, make_controls(rtol, atol, rho_max), opts);
    const auto [minus, plus] = asymptotics(sol);

    w.emit("solution.dat", solution_table(sol, 1e9, grid_step));

    nlohmann::json res;
    res["rho_minus"] = sol.rho_minus();
    res["rho_plus"] = sol.rho_plus();
    res["forward_zeros"] = sol.forward_zeros();
    res["backward_zeros"] = sol.backward_zeros();
    res["pi0"] = sol.pi0();
    res["normalization_end"] = normalize_end;
    nlohmann::json ext = nlohmann::json::array();
    for (const ThroatPoint& t : sol.throats_and_bellies())
        ext.push_back({{"rho", t.rho},
                       {"r", t.r},
                       {"Ndot", t.Ndot},
                       {"kind", t.kind == ThroatPoint::Kind::Throat  ? "throat"
                                : t.kind == ThroatPoint::Kind::Belly ? "belly"
                                                                     : "degenerate"}});
    res["extrema"] = ext;
    res["end_minus"] = {{"alpha", minus.alpha},     {"beta", minus.beta},
                        {"beta_integral", minus.beta_integral},
                        {"m_infty", minus.m_infty}, {"tau_infty", minus.tau_infty},
                        {"w_infty", minus.w_infty}};
    res["end_plus"] = {{"alpha", plus.alpha},     {"beta", plus.beta},
                       {"beta_integral", plus.beta_integral},
                       {"m_infty", plus.m_infty}, {"tau_infty", plus.tau_infty},
                       {"w_infty", plus.w_infty}};
    w.manifest.results = res;
    w.finish();
    return kOk;
}

int cmd_export(double r0, const std::vector<std::string>& pairs, const std::vector<int>& mu,
               double window, int points, double tol, double rtol, double atol, double rho_max,
               const std::string& out) {
    if (pairs.empty() && mu.empty())
        throw std::invalid_argument("export-figure: nothing requested (need --pair and/or --mu)");
    if (points < 2) throw std::invalid_argument("export-figure: --points must be >= 2");
    if (!(window > 0.0)) throw std::invalid_argument("export-figure: --window must be positive");

    Writer w(out, "export-figure");
    w.param("r0", r0);
    w.param("window", window);
    w.param("points", points);
    w.param("tol", tol);
    w.param("rtol", rtol);
    w.param("atol", atol);
    w.param("rho_max", rho_max);
    {
        std::string ps;
        for (const auto& p : pairs) ps += (ps.empty() ? "" : ";") + p;
        w.param("pairs", ps);
        std::string ms;
        for (int k : mu) ms += (ms.empty() ? "" : ";") + std::to_string(k);
        w.param("mu", ms);
    }

    const IntegrationControls c = make_controls(rtol, atol, rho_max);
    nlohmann::json res;

    for (const std::string& pair_arg : pairs) {
        int n = 0, m = 0;
        if (std::sscanf(pair_arg.c_str(), "%d,%d", &n, &m) != 2)
            throw std::invalid_argument("export-figure: --pair expects \"n,m\"");
        const AsymScan scan = find_asym_pairs(r0, n, m, tol, c, {});
        if (scan.pairs.empty())
            throw bracket_error("export-figure: no (n,m)=(" + pair_arg + ") pair found");
        const AsymPair p = scan.pairs.front();
        const WormholeSolution sol = build({r0, p.w0, p.u0}, c);

        const double lo = std::max(sol.rho_minus(), -window);
        const double hi = std::min(sol.rho_plus(), window);
        std::string nn, ww;
        for (int i = 0; i < points; ++i) {
            const double rho = lo + (hi - lo) * static_cast<double>(i) / (points - 1);
            const OrbitState s = sol.state(rho);
            nn += fmt17(rho) + " " + fmt17(s.N) + "\n";
            ww += fmt17(rho) + " " + fmt17(s.w) + "\n";
        }
        const std::string suffix = "n=" + std::to_string(n) + "_m=" + std::to_string(m);
        w.emit("N_" + suffix + ".dat", nn);
        w.emit("w_" + suffix + ".dat", ww);
        res["pair_" + suffix] = {{"w0", p.w0}, {"u0", p.u0}};
    }

    for (int k : mu) {
        const auto grid = default_w0_grid(r0, 65);
        const auto samples = u0_curve(r0, k, grid, tol, c, {});
        std::string body;
        int ok = 0;
        for (const CurveSample& s : samples) {
            if (!s.ok) {
                std::cerr << "export-figure: mu_" << k << " skipped w0=" << s.w0 << ": "
                          << s.error << "\n";
                continue;
            }
            body += fmt17(s.w0) + " " + fmt17(s.u0) + "\n";
            ++ok;
        }
        if (ok == 0) throw bracket_error("export-figure: mu_" + std::to_string(k) + " is empty");
        w.emit("mu_" + std::to_string(k) + ".dat", body);
        res["mu_" + std::to_string(k)] = ok;
    }

    w.manifest.results = res;
    w.finish();
    return kOk;
}

// self-check suite: oracle equivalence plus the cheap structural invariants
int cmd_verify() {
    int pass = 0, fail = 0;
    auto report = [&](const std::string& name, bool ok) {
        std::cout << (ok ? "ok   " : "FAIL ") << name << "\n";
        (ok ? pass : fail) += 1;
    };

    IntegrationControls c;
    c.rho_max = 10.0;

    auto oracle_worst = [&](const OracleKind& k) {
        const Trajectory t = integrate(oracle_state(k, 0.0), c);
        double worst = 0.0;
        for (double rho = 0.0; rho <= 10.0; rho += 1.25) {
            const StateVec got = t.sample(rho).vec();
            const StateVec want = oracle_state(k, rho).vec();
            for (int i = 0; i < 6; ++i)
                worst = std::max(worst, std::abs(got[i] - want[i]) / (1.0 + std::abs(want[i])));
        }
        return worst;
    };
    for (double rr : {0.3, 1.0, 2.0})
        report("ellis-bronnikov closed form r0=" + fmt12(rr).substr(0, 4),
               oracle_worst(OracleKind::ellis_bronnikov(rr)) <= 1e-8);
    for (double rr : {1.0, 1.5, 3.0})
        report("abelian closed form r0=" + fmt12(rr).substr(0, 4),
               oracle_worst(OracleKind::abelian(rr)) <= 1e-8);

    // constraint drift and basic inequalities on a small deterministic sweep
    {
        bool drift_ok = true, ineq_ok = true;
        std::mt19937_64 rng(4242u);
        std::uniform_real_distribution<double> ur(0.3, 2.5), uw(-1.0, 1.0), uu(-2.0, 2.0);
        int done = 0;
        while (done < 20) {
            const InitialData d{ur(rng), uw(rng), uu(rng)};
            if (!d.admissible()) continue;
            ++done;
            const Trajectory t = integrate(initial_state(d), c);
            double nrm = 0.0;
            for (const OrbitState& s : t.nodes()) nrm = std::max(nrm, s.norm());
            const double bound = 100.0 * std::max(c.rtol, c.atol) * (1.0 + nrm * nrm);
            const double se = std::sqrt(std::max(0.0, d.energy()));
            for (const OrbitState& s : t.nodes()) {
                if (std::abs(constraint_residual(s)) > bound) drift_ok = false;
                if (s.kappa < std::tanh(s.rho) - 1e-9) ineq_ok = false;
                if (s.N > std::tanh(s.rho) + 1e-9) ineq_ok = false;
                if (s.zeta < -1e-9 || s.zeta > se / std::cosh(s.rho) + 1e-9) ineq_ok = false;
            }
        }
        report("constraint drift within bound", drift_ok);
        report("energy inequalities", ineq_ok);
    }

    // symmetric build geometry
    try {
        const WormholeSolution sol = build({2.0, 1.0, 0.0}, c);
        const auto [minus, plus] = asymptotics(sol);
        report("ellis-bronnikov build charges",
               std::abs(plus.alpha - 2.0) <= 1e-8 && std::abs(plus.beta) <= 1e-8 &&
                   std::abs(minus.alpha - 2.0) <= 1e-8);
        report("single throat at rho=0", sol.throats_and_bellies().size() == 1 &&
                                             sol.throats_and_bellies()[0].rho == 0.0);
    } catch (const std::exception&) {
        report("ellis-bronnikov build charges", false);
        report("single throat at rho=0", false);
    }

    std::cout << "verify: " << pass << " passed, " << fail << " failed\n";
    return fail == 0 ? kOk : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"static spherically symmetric SU(2) Einstein-Yang-Mills + phantom-scalar wormhole solver"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    double r0 = 1.0, w0 = 0.0, u0 = 0.0;
    double rtol = 1e-12, atol = 1e-12, rho_max = 50.0;
    double tol = 1e-11, phantom_factor = std::numbers::sqrt2, grid_step = 0.01;
    double window = 25.0, asym_tol = 1e-10;
    int n_max = 3, n = 0, m = 2, grid = 65, points = 801;
    std::string parity = "even", normalize_end = "plus", out = ".";
    std::vector<std::string> pair_specs;
    std::vector<int> mu_list;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--rtol", rtol, "relative tolerance")->capture_default_str();
        cmd->add_option("--atol", atol, "absolute tolerance")->capture_default_str();
        cmd->add_option("--rho-max", rho_max, "integration horizon")->capture_default_str();
        cmd->add_option("--out", out, "output directory")->capture_default_str();
    };

    CLI::App* ci = app.add_subcommand("integrate", "integrate one orbit and write the trajectory");
    ci->add_option("--r0", r0, "initial areal radius")->required();
    ci->add_option("--w0", w0, "initial Yang-Mills potential")->required();
    ci->add_option("--u0", u0, "initial scaled derivative U0")->required();
    add_common(ci);

    CLI::App* cc = app.add_subcommand("classify", "classify the orbit of one datum");
    cc->add_option("--r0", r0)->required();
    cc->add_option("--w0", w0)->required();
    cc->add_option("--u0", u0)->required();
    add_common(cc);

    CLI::App* cs = app.add_subcommand("shoot", "find the regular sequence on a symmetry axis");
    cs->add_option("--r0", r0)->required();
    cs->add_option("--parity", parity, "even (vary w0) or odd (vary U0)")
        ->check(CLI::IsMember({"even", "odd"}))
        ->required();
    cs->add_option("--n-max", n_max, "largest zero count")->capture_default_str();
    cs->add_option("--tol", tol, "bisection bracket width")->capture_default_str();
    add_common(cs);

    CLI::App* ca = app.add_subcommand("asym", "locate asymmetric wormhole initial data");
    ca->add_option("--r0", r0)->required();
    ca->add_option("--n", n, "forward zero count")->required();
    ca->add_option("--m", m, "backward zero count")->required();
    ca->add_option("--tol", asym_tol, "w0 refinement tolerance")->capture_default_str();
    ca->add_option("--grid", grid, "scan grid points")->capture_default_str();
    add_common(ca);

    CLI::App* cb = app.add_subcommand("build", "assemble the two-ended wormhole solution");
    cb->add_option("--r0", r0)->required();
    cb->add_option("--w0", w0)->required();
    cb->add_option("--u0", u0)->required();
    cb->add_option("--normalize-end", normalize_end, "end where tau -> 0")
        ->check(CLI::IsMember({"plus", "minus"}))
        ->capture_default_str();
    cb->add_option("--phantom-factor", phantom_factor)->capture_default_str();
    cb->add_option("--grid-step", grid_step, "output sampling step")->capture_default_str();
    add_common(cb);

    CLI::App* cv = app.add_subcommand("verify", "run the oracle and invariant self-checks");

    CLI::App* ce = app.add_subcommand("export-figure", "emit plot-ready .dat files");
    ce->add_option("--r0", r0)->required();
    ce->add_option("--pair", pair_specs, "asymmetric pair \"n,m\" (repeatable)");
    ce->add_option("--mu", mu_list, "curve index n for mu_<n>.dat (repeatable)");
    ce->add_option("--window", window, "symmetric rho window")->capture_default_str();
    ce->add_option("--points", points, "samples per curve")->capture_default_str();
    ce->add_option("--tol", asym_tol, "pair/curve tolerance")->capture_default_str();
    add_common(ce);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kBadInput;
    }

    try {
        if (ci->parsed()) return cmd_integrate(r0, w0, u0, rtol, atol, rho_max, out);
        if (cc->parsed()) return cmd_classify(r0, w0, u0, rtol, atol, rho_max, out);
        if (cs->parsed()) return cmd_shoot(r0, parity, n_max, tol, rtol, atol, rho_max, out);
        if (ca->parsed()) return cmd_asym(r0, n, m, asym_tol, grid, rtol, atol, rho_max, out);
        if (cb->parsed())
            return cmd_build(r0, w0, u0, normalize_end, phantom_factor, grid_step, rtol, atol,
                             rho_max, out);
        if (cv->parsed()) return cmd_verify();
        if (ce->parsed())
            return cmd_export(r0, pair_specs, mu_list, window, points, asym_tol, rtol, atol,
                              rho_max, out);
    } catch (const bracket_error& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return kBracketFailure;
    } catch (const asymptotics_error& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return kAsymptoticsUnconverged;
    } catch (const integration_error& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return kIntegrationFailure;
    } catch (const build_error& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return kBadInput;
    } catch (const std::domain_error& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return kBadInput;
    } catch (const std::invalid_argument& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return kBadInput;
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return kIntegrationFailure;
    }
    return kOk;
}
