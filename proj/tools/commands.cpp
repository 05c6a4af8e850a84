#include "commands.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>

#include <omp.h>

#include "pathsum/io.hpp"
#include "pathsum/oracle.hpp"
#include "pathsum/presets.hpp"
#include "pathsum/propagator.hpp"
#include "pathsum/rwa.hpp"

namespace pathsum::cli {

namespace {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

struct Output {
    json spec;
    json diagnostics = json::object();
};

void check_knobs(const RunConfig& c) {
    if (c.out.empty()) throw SpecError("out", "an output path is required");
    if (c.grid < 2) throw SpecError("grid", "must be >= 2");
    if (!(c.tol > 0.0)) throw SpecError("tol", "must be positive");
    if (c.kmax < 1) throw SpecError("kmax", "must be >= 1");
    if (!(c.t_max > 0.0) || !std::isfinite(c.t_max)) throw SpecError("t-max", "must be positive");
    if (c.threads < 0) throw SpecError("threads", "must be >= 0");
    if (c.frame != "lab" && c.frame != "rotated") throw SpecError("frame", "expected lab or rotated");
    if (c.engine != "series" && c.engine != "grid" && c.engine != "oracle")
        throw SpecError("engine", "expected series, grid or oracle");
}

std::pair<int, int> parse_res(const std::string& s) {
    int a = 0, b = 0;
    char x = 0, tail = 0;
    if (std::sscanf(s.c_str(), "%d%c%d%c", &a, &x, &b, &tail) != 3 || x != 'x' || a < 2 || b < 2)
        throw SpecError("res", "expected <int>x<int> with both counts >= 2, got '" + s + "'");
    return {a, b};
}

DriveSpec load_spec(const RunConfig& c) {
    if (!c.preset.empty() && !c.spec_path.empty()) throw SpecError("spec", "give either --spec or --preset");
    DriveSpec d;
    if (!c.preset.empty()) {
        d = presets::by_name(c.preset);
    } else {
        if (c.spec_path.empty()) throw SpecError("spec", "a drive spec (--spec or --preset) is required");
        d = load_drive(c.spec_path);
    }
    d.validate();
    return d;
}

SweepSpec load_sweep(const RunConfig& c) {
    const auto [r1, r2] = parse_res(c.res);
    SweepSpec s;
    if (!c.preset.empty()) {
        if (!c.spec_path.empty()) throw SpecError("spec", "give either --spec or --preset");
        if (c.preset == "fig3a") s = presets::fig3a_sweep();
        else if (c.preset == "fig4a") s = presets::fig4a_sweep();
        else throw SpecError("preset", "no sweep preset named '" + c.preset + "' (fig3a, fig4a)");
    } else {
        if (c.spec_path.empty()) throw SpecError("spec", "a sweep spec (--spec or --preset) is required");
        std::ifstream in(c.spec_path);
        if (!in) throw SpecError("spec", "cannot open spec file " + c.spec_path);
        json j;
        try {
            in >> j;
        } catch (const json::parse_error& e) {
            throw SpecError("spec", c.spec_path + ": " + e.what());
        }
        try {
            s = sweep_from_json(j);
        } catch (const SpecError& e) {
            std::string msg = e.what();
            if (!e.key.empty()) msg = msg.substr(e.key.size() + 2);
            throw SpecError(e.key, c.spec_path + ": " + msg);
        }
    }
    s.range1.count = r1;
    s.range2.count = r2;
    s.validate();
    return s;
}

int sample_count(const RunConfig& c) {
    return std::max(2, static_cast<int>(std::lround((c.grid - 1) * c.t_max)) + 1);
}

std::vector<double> uniform_times(double t1, int n) {
    std::vector<double> t(n);
    for (int i = 0; i < n; ++i) t[i] = i + 1 == n ? t1 : t1 * i / (n - 1);
    return t;
}

double oracle_tol(const RunConfig& c) { return std::min(1e-10, 1e-2 * c.tol); }

struct Trace {
    std::vector<Unitary2> u;  // rotated frame unless the oracle ran in the lab frame
    bool lab = false;
    json diag = json::object();
};

Trace run_trace(const DriveSpec& d, const std::vector<double>& times, const std::string& engine, const RunConfig& c) {
    Trace tr;
    if (engine == "oracle") {
        OracleOptions o;
        o.tol = oracle_tol(c);
        tr.lab = c.frame == "lab";
        tr.u = integrate_trace(d, times, tr.lab ? Frame::Lab : Frame::Rotated, o);
        tr.diag["oracle_tol"] = o.tol;
        return tr;
    }
    const KernelSpec ks = KernelSpec::from_drive(d);
    tr.diag["band"] = {ks.band.l_min, ks.band.l_max};
    if (engine == "series") {
        SeriesOptions o;
        o.tol = c.tol;
        o.k_max = c.kmax;
        const SeriesTrace st = unitary_analytic_trace(ks, times, o);
        tr.u = st.u;
        tr.diag["orders_used"] = st.orders_used;
        tr.diag["method"] = st.method;
    } else {
        GridOptions o;
        o.tol = c.tol;
        o.k_max = c.kmax;
        const UnitaryTrace gt = unitary_grid_trace(ks, times.front(), times.back(), static_cast<int>(times.size()), o);
        tr.u = gt.u;
        tr.diag["orders_used"] = gt.orders_used;
        tr.diag["last_term_norm"] = gt.last_term_norm;
        tr.diag["self_check"] = gt.self_check;
        tr.diag["refinement"] = gt.refinement;
        tr.diag["doubling_change"] = gt.doubling_change;
    }
    return tr;
}

Unitary2 in_frame(const DriveSpec& d, const Trace& tr, std::size_t i, double t, const RunConfig& c) {
    if (tr.lab || c.frame == "rotated") return tr.u[i];
    return rotated_to_lab(d, tr.u[i], t, 0.0);
}

json knobs_json(const RunConfig& c) {
    json k = {{"grid", c.grid}, {"tol", c.tol},       {"kmax", c.kmax},     {"t_max", c.t_max},
              {"res", c.res},   {"threads", c.threads}, {"frame", c.frame}, {"engine", c.engine}};
    if (c.l_set) k["l"] = c.l;
    k["paper_sign"] = c.paper_sign;
    k["paper_rabi_scale"] = c.paper_rabi_scale;
    if (!c.preset.empty()) k["preset"] = c.preset;
    if (!c.spec_path.empty()) k["spec_path"] = c.spec_path;
    return k;
}

void finish(const RunConfig& c, const std::string& artifact, const Output& o, Clock::time_point start) {
    json m;
    m["artifact"] = artifact;
    m["command"] = c.command;
    m["version"] = PATHSUM_VERSION;
    m["spec"] = o.spec;
    m["knobs"] = knobs_json(c);
    m["threads_used"] = omp_get_max_threads();
    m["diagnostics"] = o.diagnostics;
    m["wall_time_s"] = std::chrono::duration<double>(Clock::now() - start).count();
    io::write_manifest(artifact, m);
}

void push_u(std::vector<double>& row, const Unitary2& u) {
    for (cplx z : {u.u11, u.u12, u.u21, u.u22}) {
        row.push_back(z.real());
        row.push_back(z.imag());
    }
}

// ---- subcommands ----------------------------------------------------------

void cmd_kernel(const RunConfig& c) {
    const auto start = Clock::now();
    const DriveSpec d = load_spec(c);
    const KernelSpec ks = KernelSpec::from_drive(d);
    const int n = sample_count(c);
    const double t1 = c.t_max * d.period();
    const TwoTimeGrid g = kernel_grid(ks, 0.0, t1, n);

    io::CsvWriter w(c.out, {"t", "s", "re", "im"});
    for (int j = 0; j < n; ++j)  // s-major
        for (int i = j; i < n; ++i) {
            const cplx k = g.values(i, j);
            w.row({g.time(i), g.time(j), k.real(), k.imag()});
        }
    w.close();
    Output o;
    o.spec = drive_to_json(d);
    o.diagnostics = {{"band", {ks.band.l_min, ks.band.l_max}}, {"terms", ks.coeff.size()}, {"n_points", n}};
    finish(c, c.out, o, start);

    if (!c.gbf_table.empty()) {
        io::CsvWriter gw(c.gbf_table, {"l", "re", "im", "modulus"});
        for (int l = ks.gbf.l_min; l <= ks.gbf.l_max; ++l) {
            const cplx j = ks.gbf.at(l);
            gw.row({static_cast<double>(l), j.real(), j.imag(), std::abs(j)});
        }
        gw.close();
        Output go;
        go.spec = o.spec;
        go.diagnostics = {{"band", {ks.gbf.l_min, ks.gbf.l_max}}, {"max_modulus", ks.gbf.max_modulus()}};
        finish(c, c.gbf_table, go, start);
    }
}

void cmd_evolve(const RunConfig& c) {
    const auto start = Clock::now();
    const DriveSpec d = load_spec(c);
    const auto times = uniform_times(c.t_max * d.period(), sample_count(c));
    const Trace tr = run_trace(d, times, c.engine, c);

    io::CsvWriter w(c.out, {"t", "p", "u11_re", "u11_im", "u12_re", "u12_im", "u21_re", "u21_im", "u22_re", "u22_im",
                            "unitarity_defect"});
    double worst = 0.0;
    for (std::size_t i = 0; i < times.size(); ++i) {
        const Unitary2 u = in_frame(d, tr, i, times[i], c);
        const double defect = u.unitarity_defect();
        worst = std::max(worst, defect);
        std::vector<double> row{times[i], reported_probability(u)};
        push_u(row, u);
        row.push_back(defect);
        w.row(row);
    }
    w.close();
    Output o;
    o.spec = drive_to_json(d);
    o.diagnostics = tr.diag;
    o.diagnostics["max_unitarity_defect"] = worst;
    finish(c, c.out, o, start);
}

void cmd_prob_map(const RunConfig& c) {
    const auto start = Clock::now();
    const DriveSpec d = load_spec(c);
    const int n = sample_count(c);
    const double t1 = c.t_max * d.period();
    GridOptions go;
    go.tol = c.tol;
    go.k_max = c.kmax;
    const UnitaryGrid ug = unitary_grid(d, 0.0, t1, n, go);

    json meta = {{"axis1", "t"}, {"axis2", "s"}, {"range1", {0.0, t1, n}}, {"range2", {0.0, t1, n}},
                 {"value", "p(t,s)"}, {"engine", "grid"}};
    io::CsvWriter w(c.out, {"axis1", "axis2", "value"}, meta.dump());
    for (int i2 = 0; i2 < n; ++i2)
        for (int i1 = 0; i1 < n; ++i1) {
            // U(t, s) = U(s, t)^dagger for t < s
            const double p = i1 >= i2 ? std::norm(ug.u12.values(i1, i2)) : std::norm(ug.u21.values(i2, i1));
            w.row({ug.u11.time(i1), ug.u11.time(i2), std::clamp(p, 0.0, 1.0)});
        }
    w.close();
    Output o;
    o.spec = drive_to_json(d);
    o.diagnostics = {{"orders_used", ug.orders_used},
                     {"last_term_norm", ug.last_term_norm},
                     {"max_unitarity_defect", ug.max_unitarity_defect},
                     {"self_check", ug.self_check}};
    finish(c, c.out, o, start);
}

void write_map(const RunConfig& c, const SweepSpec& s, const MapResult& m, json meta, Clock::time_point start) {
    io::CsvWriter w(c.out, {"axis1", "axis2", "value"}, meta.dump());
    for (int i2 = 0; i2 < m.n2; ++i2)
        for (int i1 = 0; i1 < m.n1; ++i1) w.row({m.axis1[i1], m.axis2[i2], m.at(i1, i2)});
    w.close();
    Output o;
    o.spec = sweep_to_json(s);
    double lo = m.values.empty() ? 0.0 : m.values.front(), hi = lo;
    for (double v : m.values) lo = std::min(lo, v), hi = std::max(hi, v);
    o.diagnostics = {{"cells", m.values.size()}, {"min", lo}, {"max", hi}};
    finish(c, c.out, o, start);
}

void cmd_rabi_map(const RunConfig& c) {
    const auto start = Clock::now();
    const SweepSpec s = load_sweep(c);
    const int l = c.l_set ? c.l : static_cast<int>(std::lround(-s.base.eps0 / s.base.omega));
    const MapResult m = rabi_map(s, l);
    json meta = sweep_to_json(s);
    meta["value"] = "|J_l|";
    meta["l"] = l;
    write_map(c, s, m, meta, start);
}

void cmd_avg_map(const RunConfig& c) {
    const auto start = Clock::now();
    const SweepSpec s = load_sweep(c);
    RwaOptions ro;
    ro.paper_sign = c.paper_sign;
    ro.paper_rabi_scale = c.paper_rabi_scale;
    const MapResult m = avg_map(s, ro);
    json meta = sweep_to_json(s);
    meta["value"] = "rwa_average";
    meta["paper_sign"] = c.paper_sign;
    meta["paper_rabi_scale"] = c.paper_rabi_scale;
    write_map(c, s, m, meta, start);
}

void cmd_quasi(const RunConfig& c) {
    const auto start = Clock::now();
    const DriveSpec d = load_spec(c);
    const double T = d.period();
    const Trace tr = run_trace(d, uniform_times(T, c.engine == "grid" ? c.grid : 2), c.engine, c);
    const Unitary2 u = in_frame(d, tr, tr.u.size() - 1, T, c);
    const Quasienergies q = quasienergies(u, T);

    io::CsvWriter w(c.out, {"eps_plus", "eps_minus", "unitarity_defect"});
    w.row({q.eps_plus, q.eps_minus, q.unitarity_defect});
    w.close();
    Output o;
    o.spec = drive_to_json(d);
    o.diagnostics = tr.diag;
    o.diagnostics["monodromy"] = {{"u11", {u.u11.real(), u.u11.imag()}}, {"u12", {u.u12.real(), u.u12.imag()}},
                                  {"u21", {u.u21.real(), u.u21.imag()}}, {"u22", {u.u22.real(), u.u22.imag()}}};
    finish(c, c.out, o, start);
}

void cmd_heff(const RunConfig& c) {
    const auto start = Clock::now();
    const DriveSpec d = load_spec(c);
    GridOptions go;
    go.tol = c.tol;
    go.k_max = c.kmax;
    const HeffResult h = effective_hamiltonian(d, d.period(), std::max(64, c.grid - 1), go);

    io::CsvWriter w(c.out, {"entry", "re", "im"});
    const std::pair<const char*, cplx> entries[] = {{"h11", h.h.u11}, {"h12", h.h.u12}, {"h21", h.h.u21}, {"h22", h.h.u22}};
    for (const auto& [name, z] : entries) w.row_text({name, io::format_number(z.real()), io::format_number(z.imag())});
    w.close();
    Output o;
    o.spec = drive_to_json(d);
    o.diagnostics = {{"frame", "rotated"},
                     {"hermiticity_defect", h.hermiticity_defect},
                     {"doubling_change", h.doubling_change},
                     {"n_quad", h.n_quad}};
    finish(c, c.out, o, start);
}

int cmd_validate(const RunConfig& c) {
    const auto start = Clock::now();
    std::vector<std::pair<std::string, DriveSpec>> cases;
    if (!c.spec_path.empty() || !c.preset.empty()) {
        cases.emplace_back(c.preset.empty() ? std::filesystem::path(c.spec_path).stem().string() : c.preset,
                           load_spec(c));
    } else {
        for (const char* name : {"fig1a", "fig1b", "fig1c", "fig2a", "fig2d", "fig2g", "weak_resonant"})
            cases.emplace_back(name, presets::by_name(name));
    }
    struct Row {
        std::string id, engine;
        double dp, defect;
        int orders;
        bool pass;
    };
    std::vector<Row> rows;
    json spec_list = json::array();
    for (const auto& [id, d] : cases) {
        spec_list.push_back({{"case", id}, {"spec", drive_to_json(d)}});
        const auto times = uniform_times(c.t_max * d.period(), sample_count(c));
        const Trace ref = run_trace(d, times, "oracle", c);
        for (const char* engine : {"series", "grid"}) {
            const Trace tr = run_trace(d, times, engine, c);
            Row r{id, engine, 0.0, 0.0, tr.diag.value("orders_used", 0), false};
            for (std::size_t i = 0; i < times.size(); ++i) {
                r.dp = std::max(r.dp, std::abs(transition_probability(tr.u[i]) - transition_probability(ref.u[i])));
                r.defect = std::max(r.defect, tr.u[i].unitarity_defect());
            }
            r.pass = r.dp < (std::string(engine) == "series" ? 1e-6 : 1e-4);
            rows.push_back(r);
        }
    }
    io::CsvWriter w(c.out, {"case", "engine", "max_dp", "max_unitarity_defect", "orders_used", "pass"});
    bool all = true;
    for (const auto& r : rows) {
        w.row_text({r.id, r.engine, io::format_number(r.dp), io::format_number(r.defect), std::to_string(r.orders),
                    r.pass ? "true" : "false"});
        all = all && r.pass;
    }
    w.close();
    Output o;
    o.spec = spec_list;
    o.diagnostics = {{"all_pass", all}, {"cases", cases.size()}, {"thresholds", {{"series", 1e-6}, {"grid", 1e-4}}}};
    finish(c, c.out, o, start);
    if (!all) {
        std::cerr << json{{"error", "validation"}, {"message", "engine-oracle agreement outside thresholds"},
                          {"report", c.out}}.dump()
                  << '\n';
        return 6;
    }
    return 0;
}

int fail(const char* kind, const std::string& msg, json extra = json::object()) {
    json e = {{"error", kind}, {"message", msg}};
    e.update(extra);
    std::cerr << e.dump() << '\n';
    if (std::string(kind) == "spec") return 2;
    if (std::string(kind) == "convergence") return 3;
    if (std::string(kind) == "io") return 4;
    if (std::string(kind) == "budget") return 5;
    return 1;
}

}  // namespace

int run(const RunConfig& c) {
    try {
        check_knobs(c);
        if (c.threads > 0) omp_set_num_threads(c.threads);
        const std::string& cmd = c.command;
        if (cmd == "kernel") cmd_kernel(c);
        else if (cmd == "evolve") cmd_evolve(c);
        else if (cmd == "prob-map") cmd_prob_map(c);
        else if (cmd == "rabi-map") cmd_rabi_map(c);
        else if (cmd == "avg-map") cmd_avg_map(c);
        else if (cmd == "quasi") cmd_quasi(c);
        else if (cmd == "heff") cmd_heff(c);
        else if (cmd == "validate") return cmd_validate(c);
        else throw SpecError("command", "unknown command '" + cmd + "'");
        return 0;
    } catch (const SpecError& e) {
        return fail("spec", e.what(), {{"key", e.key}});
    } catch (const ConvergenceError& e) {
        return fail("convergence", e.what(), {{"last_term_norm", e.last_norm}});
    } catch (const BudgetError& e) {
        return fail("budget", e.what(), {{"required", e.required}});
    } catch (const io::IoError& e) {
        return fail("io", e.what());
    } catch (const std::filesystem::filesystem_error& e) {
        return fail("io", e.what());
    } catch (const std::exception& e) {
        return fail("internal", e.what());
    }
}

}  // namespace pathsum::cli
