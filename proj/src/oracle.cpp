#include "pathsum/oracle.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace pathsum {

namespace {

using HamFn = std::function<Unitary2(double)>;

struct Integrand {
    HamFn h;
    double scale = 1.0;  // rough bound on ||H|| plus the fastest drive frequency
};

Integrand make_integrand(const DriveSpec& spec, Frame frame, const OracleOptions& opt) {
    Integrand in;
    if (frame == Frame::Lab) {
        in.h = [spec](double t) { return hamiltonian_at(spec, t); };
        double e = std::abs(spec.eps0), fmax = 0.0;
        for (const auto& a : spec.a_coeffs) {
            e += std::abs(a.amplitude);
            fmax = std::max(fmax, a.index * spec.omega_eps());
        }
        for (const auto& b : spec.b_coeffs) {
            e += std::abs(b.amplitude);
            fmax = std::max(fmax, b.index * spec.omega_eps());
        }
        for (const auto& d : spec.d_coeffs) {
            e += std::abs(d.amplitude);
            fmax = std::max(fmax, std::abs(d.index) * spec.omega_delta());
        }
        in.scale = 0.5 * e + fmax;
    } else {
        // H_rot = [[0, D], [conj D, 0]], D(t) = sum_l J_l exp(i (eps0 + l w) t) from the truncated table
        const GbfTable tab = build_table(spec, opt.band_threshold);
        std::vector<cplx> c;
        std::vector<double> f;
        double sum = 0.0, fmax = 0.0;
        for (const auto& [l, j] : tab.coeffs) {
            if (j == 0.0) continue;
            c.push_back(j);
            f.push_back(spec.eps0 + l * spec.omega);
            sum += std::abs(j);
            fmax = std::max(fmax, std::abs(f.back()));
        }
        in.h = [c, f](double t) {
            cplx d = 0.0;
            for (std::size_t i = 0; i < c.size(); ++i) d += c[i] * std::polar(1.0, f[i] * t);
            return Unitary2{0.0, d, std::conj(d), 0.0};
        };
        in.scale = sum + fmax;
    }
    in.scale = std::max(in.scale, 1.0);
    return in;
}

// dU/dt = -i H U
Unitary2 rhs(const Unitary2& H, const Unitary2& U) { return cplx(0.0, -1.0) * (H * U); }

Unitary2 rk4(const HamFn& h, double s, double t, long n) {
    Unitary2 U = Unitary2::identity();
    const double dt = (t - s) / static_cast<double>(n);
    Unitary2 h0 = h(s);
    for (long i = 0; i < n; ++i) {
        const double a = s + i * dt;
        const Unitary2 hm = h(a + 0.5 * dt);
        const Unitary2 h1 = h(i + 1 == n ? t : a + dt);
        const Unitary2 k1 = rhs(h0, U);
        const Unitary2 k2 = rhs(hm, U + cplx(0.5 * dt) * k1);
        const Unitary2 k3 = rhs(hm, U + cplx(0.5 * dt) * k2);
        const Unitary2 k4 = rhs(h1, U + cplx(dt) * k3);
        U = U + cplx(dt / 6.0) * (k1 + cplx(2.0) * k2 + cplx(2.0) * k3 + k4);
        h0 = h1;
    }
    return U;
}

OracleResult integrate(const Integrand& in, double s, double t, double tol, const OracleOptions& opt) {
    OracleResult r;
    if (t == s) return r;
    long n = std::max<long>(2, static_cast<long>(std::ceil(opt.initial_steps * (t - s) * in.scale / 8.0)));
    Unitary2 coarse = rk4(in.h, s, t, n);
    for (;;) {
        if (2 * n > opt.max_steps) throw ConvergenceError("integrate_schrodinger: step limit exceeded", r.doubling_difference);
        const Unitary2 fine = rk4(in.h, s, t, 2 * n);
        r.doubling_difference = max_abs(fine - coarse);
        r.unitarity_defect = fine.unitarity_defect();
        r.u = fine;
        r.steps = 2 * n;
        if (r.doubling_difference < tol && r.unitarity_defect < tol) return r;
        coarse = fine;
        n *= 2;
    }
}

}  // namespace

OracleResult integrate_schrodinger(const DriveSpec& spec, double s, double t, Frame frame, const OracleOptions& opt) {
    if (!(opt.tol > 0.0)) throw std::invalid_argument("integrate_schrodinger: tol must be positive");
    if (t < s) throw std::invalid_argument("integrate_schrodinger: requires t >= s");
    return integrate(make_integrand(spec, frame, opt), s, t, opt.tol, opt);
}

std::vector<Unitary2> integrate_trace(const DriveSpec& spec, std::span<const double> times, Frame frame,
                                      const OracleOptions& opt) {
    std::vector<Unitary2> out(times.size(), Unitary2::identity());
    if (times.size() < 2) return out;
    const Integrand in = make_integrand(spec, frame, opt);
    const double total = times.back() - times.front();
    for (std::size_t i = 1; i < times.size(); ++i) {
        const double dt = times[i] - times[i - 1];
        if (dt < 0.0) throw std::invalid_argument("integrate_trace: times must ascend");
        const double tol = std::max(opt.tol * dt / total, 5e-14);
        out[i] = integrate(in, times[i - 1], times[i], tol, opt).u * out[i - 1];
    }
    return out;
}

cplx nested_quadrature_star_power(const KernelSpec& ks, int k, double t, double s, int n) {
    if (k < 1 || k > 3) throw std::invalid_argument("nested_quadrature_star_power: 1 <= k <= 3");
    if (n < 1) throw std::invalid_argument("nested_quadrature_star_power: n must be positive");
    if (t < s) throw std::invalid_argument("nested_quadrature_star_power: requires t >= s");
    if (k == 1) return kernel_at(ks, t, s);
    const double h = (t - s) / n;
    auto tau = [&](int i) { return i == n ? t : s + i * h; };
    auto trap = [](auto&& f, int upto) {
        if (upto == 0) return cplx(0.0);
        cplx acc = 0.5 * (f(0) + f(upto));
        for (int i = 1; i < upto; ++i) acc += f(i);
        return acc;
    };
    std::vector<cplx> ks_col(n + 1), kt_row(n + 1);
    for (int i = 0; i <= n; ++i) {
        ks_col[i] = kernel_at(ks, tau(i), s);
        kt_row[i] = kernel_at(ks, t, tau(i));
    }
    if (k == 2) return h * trap([&](int i) { return kt_row[i] * ks_col[i]; }, n);
    std::vector<cplx> inner(n + 1);
#pragma omp parallel for schedule(dynamic, 8)
    for (int i = 0; i <= n; ++i) {
        const double ti = tau(i);
        inner[i] = h * trap([&](int j) { return kernel_at(ks, ti, tau(j)) * ks_col[j]; }, i);
    }
    return h * trap([&](int i) { return kt_row[i] * inner[i]; }, n);
}

QuadratureResult nested_quadrature_extrapolated(const KernelSpec& ks, int k, double t, double s, int n0, double tol,
                                                int max_levels) {
    if (n0 < 32) throw std::invalid_argument("nested_quadrature_extrapolated: n0 must be >= 32");
    std::vector<std::vector<cplx>> R;
    QuadratureResult r;
    int n = n0;
    for (int i = 0; i < max_levels; ++i, n *= 2) {
        std::vector<cplx> row{nested_quadrature_star_power(ks, k, t, s, n)};
        double f = 4.0;
        for (int j = 1; j <= i; ++j, f *= 4.0) row.push_back(row[j - 1] + (row[j - 1] - R[i - 1][j - 1]) / (f - 1.0));
        R.push_back(row);
        r.value = row.back();
        r.n_final = n;
        if (i >= 2) {
            r.change = std::abs(row.back() - R[i - 1].back());
            if (r.change < tol * std::max(1.0, std::abs(row.back()))) return r;
        }
    }
    throw ConvergenceError("nested_quadrature_extrapolated: no convergence under doubling", r.change);
}

double long_time_average_probability(const DriveSpec& spec, int samples, const OracleOptions& opt) {
    if (samples < 8) throw std::invalid_argument("long_time_average_probability: need >= 8 samples");
    const double T = spec.period();
    std::vector<double> times(samples + 1);
    for (int i = 0; i <= samples; ++i) times[i] = T * i / samples;
    const auto U = integrate_trace(spec, times, Frame::Lab, opt);
    const Unitary2& F = U.back();
    Eigen::Matrix2cd m;
    m << F.u11, F.u12, F.u21, F.u22;
    Eigen::ComplexEigenSolver<Eigen::Matrix2cd> es(m);
    const auto lam = es.eigenvalues();
    std::vector<Eigen::Vector2cd> comps;
    const Eigen::Vector2cd e1(1.0, 0.0);
    if (std::abs(lam(0) - lam(1)) < 1e-9) {
        comps.push_back(e1);
    } else {
        for (int q = 0; q < 2; ++q) {
            Eigen::Vector2cd v = es.eigenvectors().col(q);
            v.normalize();
            comps.push_back(v * v.dot(e1));  // (v v^dagger) e1
        }
    }
    double acc = 0.0;
    for (int i = 0; i < samples; ++i) {
        Eigen::Matrix2cd u;
        u << U[i].u11, U[i].u12, U[i].u21, U[i].u22;
        for (const auto& c : comps) acc += std::norm((u * c)(1));
    }
    return acc / samples;
}

}  // namespace pathsum
