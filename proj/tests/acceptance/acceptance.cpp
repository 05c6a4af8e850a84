// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
// Usage: acceptance [criterion numbers...]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "pathsum/oracle.hpp"
#include "pathsum/presets.hpp"
#include "pathsum/propagator.hpp"
#include "pathsum/rwa.hpp"

using namespace pathsum;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
    bool pass = true;
    std::ostringstream detail;
    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail << "[failed: " << what << "] ";
        }
    }
};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = i + 1 == n ? b : a + (b - a) * i / (n - 1);
    return v;
}

OracleOptions tight_oracle() {
    OracleOptions o;
    o.tol = 1e-11;
    return o;
}

// ---- 1 ----------------------------------------------------------------------
void c1(Outcome& o) {
    const auto t0 = Clock::now();
    DriveSpec d;
    d.d_coeffs = {{0, 1.0}};
    const double delta = 1.0;
    const auto times = linspace(0.0, 2.0 * (2.0 * kPi / delta), 513);
    const SeriesTrace tr = unitary_analytic_trace(KernelSpec::from_drive(d), times, SeriesOptions{});
    double err = 0.0;
    for (std::size_t i = 0; i < times.size(); ++i) {
        const double ref = std::pow(std::sin(delta * times[i] / 2.0), 2);
        err = std::max(err, std::abs(transition_probability(tr.u[i]) - ref));
    }
    const double dt = seconds_since(t0);
    o.detail << "max|p - sin^2| = " << err << " (" << tr.method << "), " << dt << " s ";
    o.require(err < 1e-10, "accuracy 1e-10");
    o.require(dt < 1.0, "runtime < 1 s");
}

// ---- 2 and 7 share the engine outputs -----------------------------------------
struct EngineRun {
    std::string name;
    std::vector<double> times;
    std::vector<Unitary2> oracle, series, grid;
    double seconds = 0.0;
};

std::vector<EngineRun>& fig2_runs() {
    static std::vector<EngineRun> runs;
    if (!runs.empty()) return runs;
    const std::pair<const char*, DriveSpec> sets[] = {
        {"fig2a", presets::fig2a()}, {"fig2d", presets::fig2d()}, {"fig2g", presets::fig2g()}};
    for (const auto& [name, d] : sets) {
        const auto t0 = Clock::now();
        EngineRun r;
        r.name = name;
        r.times = linspace(0.0, d.period(), 513);
        const KernelSpec ks = KernelSpec::from_drive(d);
        r.oracle = integrate_trace(d, r.times, Frame::Lab, tight_oracle());
        r.series = unitary_analytic_trace(ks, r.times, SeriesOptions{}).u;
        r.grid = unitary_grid_trace(ks, 0.0, d.period(), 513, GridOptions{}).u;
        r.seconds = seconds_since(t0);
        runs.push_back(std::move(r));
    }
    return runs;
}

void c2(Outcome& o) {
    for (const auto& r : fig2_runs()) {
        double ds = 0.0, dg = 0.0;
        for (std::size_t i = 0; i < r.times.size(); ++i) {
            const double po = transition_probability(r.oracle[i]);
            ds = std::max(ds, std::abs(transition_probability(r.series[i]) - po));
            dg = std::max(dg, std::abs(transition_probability(r.grid[i]) - po));
        }
        o.detail << r.name << ": series " << ds << ", grid " << dg << ", " << r.seconds << " s; ";
        o.require(ds < 1e-6, r.name + " series 1e-6");
        o.require(dg < 1e-4, r.name + " grid 1e-4");
        o.require(r.seconds < 60.0, r.name + " runtime");
    }
}

// ---- 3 ----------------------------------------------------------------------
void c3(Outcome& o) {
    const auto t0 = Clock::now();
    std::mt19937_64 rng(20240601);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    double worst = 0.0;
    int resonant = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        DriveSpec d;
        d.omega = 0.5 + U(rng);
        d.eps_mult = 1 + static_cast<int>(U(rng) * 2);
        d.delta_mult = 1 + static_cast<int>(U(rng) * 2);
        const bool at_resonance = trial % 4 == 0;
        const int alpha = static_cast<int>(U(rng) * 7) - 3;
        d.eps0 = at_resonance ? -alpha * d.omega : 6.0 * (U(rng) - 0.5);
        if (U(rng) < 0.7) d.a_coeffs.push_back({1, 4.0 * U(rng)});
        if (U(rng) < 0.4) d.b_coeffs.push_back({2, 3.0 * U(rng)});
        const int nk = 1 + static_cast<int>(U(rng) * 3);
        for (int k = -1; k < nk - 1; ++k) d.d_coeffs.push_back({k, cplx(U(rng) - 0.5, U(rng) - 0.5)});
        const KernelSpec ks = KernelSpec::from_drive(d);
        if (at_resonance && ks.band.contains(alpha)) ++resonant;
        const double s = 10.0 * (U(rng) - 0.5), t = s + 8.0 * U(rng);
        const cplx a = kernel_at(ks, t, s), b = kernel_at_dd(ks, t, s);
        double scale = 0.0;
        for (cplx c : ks.coeff) scale += std::abs(c);
        scale = scale * scale * (t - s);
        if (scale == 0.0) continue;
        worst = std::max(worst, std::abs(a - b) / std::max(std::abs(a), scale));
    }
    const double dt = seconds_since(t0);
    o.detail << "max normwise relative difference " << worst << " over 1000 samples (" << resonant
             << " at exact resonance), " << dt << " s ";
    o.require(worst < 1e-12, "1e-12 relative");
    o.require(resonant > 100, "resonant samples present");
    o.require(dt < 5.0, "runtime < 5 s");
}

// ---- 4 ----------------------------------------------------------------------
void c4(Outcome& o) {
    const auto t0 = Clock::now();
    struct Case {
        const char* name;
        KernelSpec ks;
        double t, s;
    };
    // fig1d has 61 comparable coefficients, so k = 3 enumeration (61^6 tuples) is out of reach.
    // Both sides use the kernel restricted to its ten strongest channels.
    const KernelSpec full = KernelSpec::from_drive(presets::fig1d());
    std::vector<double> mags;
    for (cplx c : full.coeff) mags.push_back(std::abs(c));
    std::sort(mags.rbegin(), mags.rend());
    const KernelSpec strongest = full.pruned(mags[std::min<std::size_t>(9, mags.size() - 1)] / mags.front());
    const Case cases[] = {{"fig2a", KernelSpec::from_drive(presets::fig2a()), 2.0, 0.3},
                          {"fig1d (10 strongest channels)", strongest, 1.1, 0.4}};
    SeriesOptions so;
    so.tuple_budget = 2e6;
    for (const auto& c : cases) {
        for (int k = 1; k <= 3; ++k) {
            const cplx a = star_power_analytic(c.ks, k, c.t, c.s, so);
            const QuadratureResult q = nested_quadrature_extrapolated(c.ks, k, c.t, c.s, 32, 1e-11, 8);
            const double err = std::abs(a - q.value) / std::max(1.0, std::abs(q.value));
            o.detail << c.name << " k=" << k << ": |value| " << std::abs(q.value) << ", error " << err << "; ";
            o.require(err < 1e-8, std::string(c.name) + " k=" + std::to_string(k));
        }
    }
    const double dt = seconds_since(t0);
    o.detail << dt << " s ";
    o.require(dt < 120.0, "runtime < 120 s");
}

// ---- 5 ----------------------------------------------------------------------
void c5(Outcome& o) {
    const auto t0 = Clock::now();
    double single = 0.0;
    for (double A : {0.5, 2.0, 7.3, 13.0, 25.0}) {
        DriveSpec d;
        d.a_coeffs = {{1, A}};
        const int pmax = static_cast<int>(A) + 30;
        const CoeffMap g = gbf_coefficients(d, pmax);
        for (int p = -pmax; p <= pmax; ++p) {
            const double ref = (p < 0 && (p % 2)) ? -std::cyl_bessel_j(-p, A) : std::cyl_bessel_j(std::abs(p), A);
            single = std::max(single, std::abs(g.at(p) - ref));
        }
    }
    std::vector<DriveSpec> specs;
    specs.push_back(presets::fig1c());
    specs.push_back(presets::fig1d());
    specs.push_back(presets::fig2d());
    specs.push_back(presets::fig2g());
    {
        DriveSpec d;
        d.a_coeffs = {{1, 3.0}, {2, 5.0}};
        d.b_coeffs = {{1, 2.0}, {3, 1.5}};
        d.eps_mult = 2;
        d.d_coeffs = {{0, 1.0}};
        specs.push_back(d);
    }
    double conv = 0.0, ja = 0.0, parseval = 0.0;
    for (const auto& d : specs) {
        const Band b = truncation_band(d, 1e-12);
        const int pmax = (std::max(std::abs(b.l_min), std::abs(b.l_max)) + d.eps_mult) / d.eps_mult + 4;
        const CoeffMap g = gbf_coefficients(d, pmax);
        const CoeffMap h = gbf_via_bessel_convolution(d, pmax);
        double norm2 = 0.0;
        for (const auto& [p, v] : g) {
            conv = std::max(conv, std::abs(v - h.at(p)));
            norm2 += std::norm(v);
        }
        parseval = std::max(parseval, std::abs(norm2 - 1.0));
        const double we = d.omega_eps();
        for (int i = 0; i < 64; ++i) {
            const double t = d.period() * i / 64.0 + 0.013;
            cplx sum = 0.0;
            for (const auto& [p, v] : g) sum += v * std::polar(1.0, p * we * t);
            ja = std::max(ja, std::abs(sum - std::polar(1.0, phase_antiderivative(d, t))));
        }
    }
    const double dt = seconds_since(t0);
    o.detail << "single-harmonic " << single << ", convolution " << conv << ", Jacobi-Anger " << ja << ", Parseval "
             << parseval << ", " << dt << " s ";
    o.require(single < 1e-12, "single harmonic 1e-12");
    o.require(conv < 1e-10, "convolution 1e-10");
    o.require(ja < 1e-9, "Jacobi-Anger 1e-9");
    o.require(parseval < 1e-9, "Parseval 1e-9");
    o.require(dt < 10.0, "runtime < 10 s");
}

// ---- 6 ----------------------------------------------------------------------
void c6(Outcome& o) {
    const auto t0 = Clock::now();
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    double perm = 0.0, confl = 0.0, bound_excess = 0.0, cont = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 1 + trial % 12;
        std::vector<double> x(n + 1);
        for (double& v : x) v = 5.0 * U(rng);
        const double tau = 4.0 * U(rng);
        const cplx ref = exp_divided_difference(x, tau);
        for (int r = 0; r < 5; ++r) {
            std::shuffle(x.begin(), x.end(), rng);
            perm = std::max(perm, std::abs(exp_divided_difference(x, tau) - ref) / std::max(std::abs(ref), 1e-300));
        }
    }
    for (double a : {-3.0, -0.5, 0.0, 0.7, 4.0})
        for (int n = 0; n <= 10; ++n)
            for (double tau : {0.3, 1.0, 2.5}) {
                const std::vector<double> x(n + 1, a);
                const cplx ref = std::pow(cplx(0.0, tau), n) * std::polar(1.0, a * tau) / std::tgamma(n + 1.0);
                confl = std::max(confl, std::abs(exp_divided_difference(x, tau) - ref) / std::abs(ref));
            }
    for (int trial = 0; trial < 10000; ++trial) {
        const int n = trial % 13;
        std::vector<double> x(n + 1);
        for (double& v : x) v = 10.0 * U(rng);
        const double tau = 10.0 * U(rng);
        const double bound = std::pow(std::abs(tau), n) / std::tgamma(n + 1.0);
        bound_excess = std::max(bound_excess, std::abs(exp_divided_difference(x, tau)) / bound - 1.0);
    }
    for (double a : {-2.0, 0.5, 3.0}) {
        const cplx c = exp_divided_difference(std::vector<double>{a, a, 0.0}, 1.0);
        const cplx h = exp_divided_difference(std::vector<double>{a, a + 1e-8, 0.0}, 1.0);
        cont = std::max(cont, std::abs(c - h));
    }
    const double dt = seconds_since(t0);
    o.detail << "permutation " << perm << ", confluent " << confl << ", simplex excess " << bound_excess
             << ", continuity " << cont << ", " << dt << " s ";
    o.require(perm < 1e-13, "permutation 1e-13");
    o.require(confl < 1e-12, "confluent 1e-12");
    o.require(bound_excess <= 1e-12, "simplex bound");
    o.require(cont < 1e-6, "continuity 1e-6");
    o.require(dt < 10.0, "runtime < 10 s");
}

// ---- 7 ----------------------------------------------------------------------
void c7(Outcome& o) {
    const double tol = 1e-8, lim = 10.0 * tol;
    double unit = 0.0, comp = 0.0, comp_s = 0.0, comp_g = 0.0, comp_o = 0.0;
    auto defect_of = [&](const std::vector<Unitary2>& us) {
        for (const auto& u : us) unit = std::max(unit, u.unitarity_defect());
    };
    // criterion 1 output
    {
        DriveSpec d;
        d.d_coeffs = {{0, 1.0}};
        const auto times = linspace(0.0, 4.0 * kPi, 513);
        defect_of(unitary_analytic_trace(KernelSpec::from_drive(d), times, SeriesOptions{}).u);
    }
    const std::pair<const char*, DriveSpec> sets[] = {
        {"fig2a", presets::fig2a()}, {"fig2d", presets::fig2d()}, {"fig2g", presets::fig2g()}};
    const auto& runs = fig2_runs();
    for (std::size_t q = 0; q < runs.size(); ++q) {
        const auto& r = runs[q];
        defect_of(r.series);
        defect_of(r.grid);
        defect_of(r.oracle);
        // U(t, 0) = U(t, r) U(r, 0) with r at grid index 128 of 512
        const DriveSpec& d = sets[q].second;
        const KernelSpec ks = KernelSpec::from_drive(d);
        const int ir = 128;
        const std::vector<double> tail(r.times.begin() + ir, r.times.end());
        const auto s_tail = unitary_analytic_trace(ks, tail, SeriesOptions{}).u;
        const auto g_tail = unitary_grid_trace(ks, tail.front(), tail.back(), static_cast<int>(tail.size()), GridOptions{}).u;
        const auto o_tail = integrate_trace(d, tail, Frame::Lab, tight_oracle());
        defect_of(s_tail);
        defect_of(g_tail);
        for (std::size_t j = 0; j < tail.size(); j += 16) {
            comp_s = std::max(comp_s, max_abs(r.series[ir + j] - s_tail[j] * r.series[ir]));
            comp_g = std::max(comp_g, max_abs(r.grid[ir + j] - g_tail[j] * r.grid[ir]));
            comp_o = std::max(comp_o, max_abs(r.oracle[ir + j] - o_tail[j] * r.oracle[ir]));
        }
    }
    comp = std::max({comp_s, comp_g, comp_o});
    o.detail << "max unitarity defect " << unit << ", composition defect series " << comp_s << ", grid " << comp_g
             << ", oracle " << comp_o << " (limit " << lim << ") ";
    o.require(unit < lim, "unitarity");
    o.require(comp < lim, "composition");
}

// ---- 8 ----------------------------------------------------------------------
void c8(Outcome& o) {
    const auto t0 = Clock::now();
    const DriveSpec d = presets::fig2a();
    const double T = d.period();
    const SeriesResult s = unitary_analytic(KernelSpec::from_drive(d), T, 0.0);
    const OracleResult r = integrate_schrodinger(d, 0.0, T, Frame::Rotated, tight_oracle());
    const Quasienergies qs = quasienergies(s.u, T), qo = quasienergies(r.u, T);
    const cplx half = 0.5 * s.u.trace(), root = I * std::sqrt(s.u.det() - half * half);
    const double unimod = std::max(std::abs(std::abs(half + root) - 1.0), std::abs(std::abs(half - root) - 1.0));
    const double diff = std::max(std::abs(qs.eps_plus - qo.eps_plus), std::abs(qs.eps_minus - qo.eps_minus));
    const double dt = seconds_since(t0);
    o.detail << "eps = (" << qs.eps_plus << ", " << qs.eps_minus << "), |lambda| - 1 = " << unimod
             << ", series vs oracle " << diff << ", " << dt << " s ";
    o.require(unimod < 1e-6, "unimodular 1e-6");
    o.require(diff < 1e-6 * d.omega, "quasienergy 1e-6 w");
    o.require(dt < 10.0, "runtime < 10 s");
}

// ---- 9 ----------------------------------------------------------------------
// Ridge cells: local maxima (8-neighbourhood) holding at least half the map maximum.
std::vector<std::pair<int, int>> ridges(const MapResult& m) {
    double top = 0.0;
    for (double v : m.values) top = std::max(top, v);
    std::vector<std::pair<int, int>> out;
    for (int i2 = 0; i2 < m.n2; ++i2)
        for (int i1 = 0; i1 < m.n1; ++i1) {
            const double v = m.at(i1, i2);
            if (v < 0.5 * top) continue;
            bool peak = true;
            for (int a = -1; a <= 1 && peak; ++a)
                for (int b = -1; b <= 1; ++b) {
                    const int j1 = i1 + a, j2 = i2 + b;
                    if ((a || b) && j1 >= 0 && j1 < m.n1 && j2 >= 0 && j2 < m.n2 && m.at(j1, j2) > v) {
                        peak = false;
                        break;
                    }
                }
            if (peak) out.emplace_back(i1, i2);
        }
    return out;
}

std::vector<std::pair<int, int>> unmatched(const std::vector<std::pair<int, int>>& from,
                                           const std::vector<std::pair<int, int>>& to) {
    std::vector<std::pair<int, int>> miss;
    for (const auto& [a, b] : from) {
        bool hit = false;
        for (const auto& [c, d] : to) hit = hit || (std::abs(a - c) <= 1 && std::abs(b - d) <= 1);
        if (!hit) miss.emplace_back(a, b);
    }
    return miss;
}

void c9(Outcome& o) {
    const auto t0 = Clock::now();
    const SweepSpec sweep = presets::fig4a_sweep(21, 21);
    const DriveSpec base = sweep.base;
    double worst = 0.0;
    std::string worst_at;
    for (int i = 1; i <= 20; ++i) {
        const double A1 = sweep.range1.value(i), A2 = sweep.range2.value((7 * i) % 21);
        const DriveSpec d = apply_axis(apply_axis(base, sweep.axis1, A1), sweep.axis2, A2);
        const GbfTable tab = build_table(d);
        const auto times = linspace(0.0, 3.0 * d.period(), 301);
        const auto U = integrate_trace(d, times, Frame::Lab);
        for (std::size_t k = 0; k < times.size(); ++k) {
            const double e = std::abs(rwa_probability(tab, d.eps0, d.omega, times[k]) - transition_probability(U[k]));
            if (e > worst) {
                worst = e;
                std::ostringstream w;
                w << "(A1, A2) = (" << A1 << ", " << A2 << ")";
                worst_at = w.str();
            }
        }
    }
    const MapResult rwa = avg_map(sweep);
    MapResult exact = rwa;
    for (int i2 = 0; i2 < exact.n2; ++i2)
        for (int i1 = 0; i1 < exact.n1; ++i1) {
            const DriveSpec d = apply_axis(apply_axis(base, sweep.axis1, exact.axis1[i1]), sweep.axis2, exact.axis2[i2]);
            exact.values[static_cast<std::size_t>(i2) * exact.n1 + i1] = long_time_average_probability(d, 256);
        }
    const auto rr = ridges(rwa), re = ridges(exact);
    const auto miss_a = unmatched(rr, re), miss_b = unmatched(re, rr);
    auto cells = [&](const std::vector<std::pair<int, int>>& v) {
        std::ostringstream c;
        for (const auto& [i1, i2] : v) c << " (" << rwa.axis1[i1] << ", " << rwa.axis2[i2] << ")";
        return c.str();
    };
    const double dt = seconds_since(t0);
    o.detail << "max |p_rwa - p_oracle| (t <= 3T, 20 amplitudes) = " << worst << " at " << worst_at << "; ridges rwa "
             << rr.size() << " / oracle " << re.size() << ", rwa-only:" << cells(miss_a) << ", oracle-only:"
             << cells(miss_b) << ", " << dt << " s ";
    o.require(worst < 0.02, "probability 0.02");
    o.require(!rr.empty() && miss_a.empty() && miss_b.empty(), "ridges within one cell");
    o.require(dt < 600.0, "runtime < 10 min");
}

// ---- 10 ---------------------------------------------------------------------
void c10(Outcome& o) {
    const auto t0 = Clock::now();
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    auto shift_defect = [&](const KernelSpec& ks) {
        double worst = 0.0;
        for (int i = 0; i < 200; ++i) {
            const double s = 6.0 * U(rng), t = s + 4.0 * U(rng), c = 5.0 * (U(rng) - 0.5);
            worst = std::max(worst, std::abs(kernel_at(ks, t + c, s + c) - kernel_at(ks, t, s)));
        }
        return worst;
    };
    const double inv = shift_defect(KernelSpec::from_drive(presets::fig1a()));
    o.detail << "fig1a shift defect " << inv << "; driven:";
    o.require(inv < 1e-12, "fig1a invariance 1e-12");
    for (const auto& [name, d] : {std::pair<const char*, DriveSpec>{"fig1b", presets::fig1b()},
                                  {"fig1c", presets::fig1c()},
                                  {"fig1d", presets::fig1d()}}) {
        const double v = shift_defect(KernelSpec::from_drive(d));
        o.detail << " " << name << " " << v;
        o.require(v > 1e-3, std::string(name) + " breaks invariance");
    }
    // zero set of |J_{-1}| on the A2 = 0 row against zeros of J_1 (Delta_0 only: |J_l| = |Delta_0/2| |J_l(A1)|)
    const SweepSpec sweep = presets::fig3a_sweep(81, 81);
    const MapResult m = rabi_map(sweep, -1);
    const int row = 40;
    const double step = m.axis1[1] - m.axis1[0];
    std::vector<double> minima;
    for (int i = 1; i + 1 < m.n1; ++i)
        if (m.at(i, row) <= m.at(i - 1, row) && m.at(i, row) <= m.at(i + 1, row)) minima.push_back(m.axis1[i]);
    std::vector<double> zeros{0.0};
    for (double a = 0.01; a < 40.0; a += 0.01)
        if (std::cyl_bessel_j(1, a) * std::cyl_bessel_j(1, a + 0.01) < 0.0) {
            double lo = a, hi = a + 0.01;
            for (int it = 0; it < 60; ++it) {
                const double mid = 0.5 * (lo + hi);
                (std::cyl_bessel_j(1, lo) * std::cyl_bessel_j(1, mid) <= 0.0 ? hi : lo) = mid;
            }
            zeros.push_back(0.5 * (lo + hi));
            zeros.push_back(-0.5 * (lo + hi));
        }
    int missing = 0, spurious = 0;
    for (double z : zeros) {
        bool hit = false;
        for (double x : minima) hit = hit || std::abs(x - z) <= step;
        missing += !hit;
    }
    for (double x : minima) {
        bool hit = false;
        for (double z : zeros) hit = hit || std::abs(x - z) <= step;
        spurious += !hit;
    }
    const double dt = seconds_since(t0);
    o.detail << "; A2 = 0 row: " << zeros.size() << " Bessel zeros, " << minima.size() << " map minima, missing "
             << missing << ", spurious " << spurious << ", " << dt << " s ";
    o.require(missing == 0 && spurious == 0, "zero set");
    o.require(dt < 300.0, "runtime < 5 min");
}

// ---- 11 ---------------------------------------------------------------------
void c11(Outcome& o) {
    const auto t0 = Clock::now();
    const DriveSpec d = presets::weak_resonant();
    const int alpha = static_cast<int>(std::lround(-d.eps0 / d.omega));
    const GbfTable tab = build_table(d);
    const cplx j = rwa_hamiltonian(tab, alpha).u12;
    const HeffResult h = effective_hamiltonian(d, d.period(), 512);
    const double rel = std::abs(h.h.u12 - j) / std::abs(j);
    const double dt = seconds_since(t0);
    o.detail << "|J_alpha| = " << std::abs(j) << ", H_eff[0][1] = " << h.h.u12 << ", relative deviation " << rel
             << ", " << dt << " s ";
    o.require(std::abs(std::abs(j) - 0.05 * d.omega) < 1e-12, "|J_alpha| = 0.05 w");
    o.require(rel < 0.05, "within 5%");
    o.require(dt < 30.0, "runtime < 30 s");
}

}  // namespace

int main(int argc, char** argv) {
    const std::vector<std::pair<const char*, std::function<void(Outcome&)>>> criteria = {
        {"static Rabi closed form", c1},
        {"series/grid vs oracle on Fig. 2 sets", c2},
        {"kernel form equivalence", c3},
        {"star-power nodes vs nested quadrature", c4},
        {"GBF suite", c5},
        {"divided-difference suite", c6},
        {"unitarity and composition", c7},
        {"quasienergies", c8},
        {"RWA regime", c9},
        {"figure structure", c10},
        {"effective-Hamiltonian limit", c11},
    };
    std::set<int> only;
    for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const int id = static_cast<int>(i) + 1;
        if (!only.empty() && !only.count(id)) continue;
        Outcome o;
        try {
            criteria[i].second(o);
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail << "[exception: " << e.what() << "]";
        }
        failures += !o.pass;
        std::printf("criterion %2d %s: %s | %s\n", id, o.pass ? "PASS" : "FAIL", criteria[i].first, o.detail.str().c_str());
        std::fflush(stdout);
    }
    return failures ? 1 : 0;
}
