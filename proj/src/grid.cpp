#include <cmath>
#include <stdexcept>

#include "pathsum/propagator.hpp"

namespace pathsum {

TwoTimeGrid::TwoTimeGrid(double s0_, double t1_, int n)
    : s0(s0_), t1(t1_), n_points(n), values(Eigen::MatrixXcd::Zero(n, n)) {
    if (n < 2) throw std::invalid_argument("TwoTimeGrid: n_points must be >= 2");
    if (!(t1 > s0)) throw std::invalid_argument("TwoTimeGrid: t1 must exceed s0");
}

bool TwoTimeGrid::same_grid(const TwoTimeGrid& o) const {
    return s0 == o.s0 && t1 == o.t1 && n_points == o.n_points;
}

namespace {

// Below this |f| the E(t)-E(s) difference loses digits; use the sinc form instead.
constexpr double kSlowFreq = 1e-2;

double sinc(double x) { return x == 0.0 ? 1.0 : std::sin(x) / x; }

}  // namespace

TwoTimeGrid kernel_grid(const KernelSpec& ks, double s0, double t1, int n) {
    TwoTimeGrid g(s0, t1, n);
    std::vector<cplx> d(n), e(n, 0.0);
    std::vector<std::size_t> slow;
    for (std::size_t q = 0; q < ks.coeff.size(); ++q)
        if (std::abs(ks.freq[q]) < kSlowFreq) slow.push_back(q);
    for (int i = 0; i < n; ++i) {
        const double t = g.time(i);
        d[i] = rotated_drive(ks, t);
        for (std::size_t q = 0; q < ks.coeff.size(); ++q) {
            const double f = ks.freq[q];
            if (std::abs(f) < kSlowFreq) continue;
            e[i] += std::conj(ks.coeff[q]) * std::polar(1.0, -f * t) / cplx(0.0, -f);
        }
    }
#pragma omp parallel for schedule(dynamic, 16)
    for (int i = 0; i < n; ++i) {
        const double t = g.time(i);
        for (int j = 0; j <= i; ++j) {
            const double s = g.time(j);
            cplx v = e[i] - e[j];
            for (std::size_t q : slow) {
                const double f = ks.freq[q];
                v += std::conj(ks.coeff[q]) * std::polar(1.0, -0.5 * f * (t + s)) * ((t - s) * sinc(0.5 * f * (t - s)));
            }
            g.values(i, j) = d[i] * v;
        }
    }
    return g;
}

TwoTimeGrid star_product_grid(const TwoTimeGrid& F, const TwoTimeGrid& G) {
    if (!F.same_grid(G)) throw std::invalid_argument("star_product_grid: grid mismatch");
    TwoTimeGrid C(F.s0, F.t1, F.n_points);
    const double h = F.h();
    C.values.noalias() = F.values.triangularView<Eigen::Lower>() * G.values;
    C.values *= h;
    C.values -= (0.5 * h) * (F.values.diagonal().asDiagonal() * G.values);
    C.values -= (0.5 * h) * (F.values * G.values.diagonal().asDiagonal());
    C.values.triangularView<Eigen::StrictlyUpper>().setZero();
    C.values.diagonal().setZero();
    return C;
}

NeumannResult neumann_greens(const TwoTimeGrid& kernel, double tol, int k_max) {
    if (!(tol > 0.0)) throw std::invalid_argument("neumann_greens: tol must be positive");
    NeumannResult r;
    r.greens = TwoTimeGrid(kernel.s0, kernel.t1, kernel.n_points);
    TwoTimeGrid minus_k = kernel;
    minus_k.values = -kernel.values;
    TwoTimeGrid term = minus_k;
    double norm = term.values.cwiseAbs().maxCoeff();
    int k = 0;
    while (norm >= tol) {
        if (k >= k_max) throw ConvergenceError("neumann_greens: no convergence within k_max", norm);
        ++k;
        r.greens.values += term.values;
        term = star_product_grid(term, minus_k);
        norm = term.values.cwiseAbs().maxCoeff();
    }
    r.orders_used = k;
    r.last_term_norm = norm;
    return r;
}

namespace {

struct RawGrid {
    Eigen::MatrixXcd u11, u12, u21, u22;
    int orders = 0;
    double last = 0.0;
};

RawGrid raw_unitary_grid(const KernelSpec& ks, double s0, double t1, int n, const GridOptions& opt) {
    const TwoTimeGrid K = kernel_grid(ks, s0, t1, n);
    const NeumannResult nr = neumann_greens(K, opt.tol, opt.k_max);
    const double h = K.h();
    std::vector<cplx> d(n);
    for (int i = 0; i < n; ++i) d[i] = rotated_drive(ks, K.time(i));

    RawGrid r;
    r.orders = nr.orders_used;
    r.last = nr.last_term_norm;
    r.u11 = Eigen::MatrixXcd::Zero(n, n);
    r.u21 = Eigen::MatrixXcd::Zero(n, n);
    r.u12 = Eigen::MatrixXcd::Zero(n, n);
    const auto& g = nr.greens.values;
    const cplx mi(0.0, -1.0);
    for (int j = 0; j < n; ++j) {
        r.u11(j, j) = 1.0;
        for (int i = j + 1; i < n; ++i) r.u11(i, j) = r.u11(i - 1, j) + 0.5 * h * (g(i - 1, j) + g(i, j));
    }
    r.u22 = r.u11.conjugate();
    for (int j = 0; j < n; ++j)
        for (int i = j + 1; i < n; ++i) {
            r.u21(i, j) = r.u21(i - 1, j) + mi * 0.5 * h * (std::conj(d[i - 1]) * r.u11(i - 1, j) + std::conj(d[i]) * r.u11(i, j));
            r.u12(i, j) = r.u12(i - 1, j) + mi * 0.5 * h * (d[i - 1] * r.u22(i - 1, j) + d[i] * r.u22(i, j));
        }
    r.u22.triangularView<Eigen::StrictlyUpper>().setZero();
    return r;
}

double unitarity_tolerance(const GridOptions& opt) { return opt.unitarity_tol > 0.0 ? opt.unitarity_tol : 10.0 * opt.tol; }

}  // namespace

UnitaryGrid unitary_grid(const KernelSpec& ks, double s0, double t1, int n, const GridOptions& opt) {
    if (n < 2) throw std::invalid_argument("unitary_grid: n_points must be >= 2");
    RawGrid coarse = raw_unitary_grid(ks, s0, t1, n, opt);
    UnitaryGrid out;
    out.u11 = out.u12 = out.u21 = out.u22 = TwoTimeGrid(s0, t1, n);
    out.orders_used = coarse.orders;
    out.last_term_norm = coarse.last;
    if (opt.richardson) {
        RawGrid fine = raw_unitary_grid(ks, s0, t1, 2 * n - 1, opt);
        out.orders_used = std::max(out.orders_used, fine.orders);
        auto combine = [&](const Eigen::MatrixXcd& c, const Eigen::MatrixXcd& f, Eigen::MatrixXcd& dst) {
            for (int j = 0; j < n; ++j)
                for (int i = j; i < n; ++i) {
                    const cplx fv = f(2 * i, 2 * j);
                    out.self_check = std::max(out.self_check, std::abs(fv - c(i, j)));
                    dst(i, j) = (4.0 * fv - c(i, j)) / 3.0;
                }
        };
        combine(coarse.u11, fine.u11, out.u11.values);
        combine(coarse.u12, fine.u12, out.u12.values);
        combine(coarse.u21, fine.u21, out.u21.values);
        combine(coarse.u22, fine.u22, out.u22.values);
    } else {
        out.u11.values = coarse.u11;
        out.u12.values = coarse.u12;
        out.u21.values = coarse.u21;
        out.u22.values = coarse.u22;
    }
    for (int j = 0; j < n; ++j)
        for (int i = j; i < n; ++i) out.max_unitarity_defect = std::max(out.max_unitarity_defect, out.at(i, j).unitarity_defect());
    if (out.max_unitarity_defect > unitarity_tolerance(opt))
        throw ConvergenceError("unitary_grid: unitarity defect exceeded; increase n_points", out.max_unitarity_defect);
    return out;
}

UnitaryGrid unitary_grid(const DriveSpec& spec, double s0, double t1, int n, const GridOptions& opt) {
    return unitary_grid(KernelSpec::from_drive(spec), s0, t1, n, opt);
}

namespace {

struct RawTrace {
    std::vector<Unitary2> u;
    int orders = 0;
    double last = 0.0;
};

RawTrace raw_trace(const KernelSpec& ks, double s0, double t1, int n, const GridOptions& opt) {
    const TwoTimeGrid K = kernel_grid(ks, s0, t1, n);
    const double h = K.h();
    const Eigen::MatrixXcd L = -K.values;
    const Eigen::VectorXcd ldiag = L.diagonal();
    const Eigen::VectorXcd lcol0 = L.col(0);

    Eigen::VectorXcd term = L.col(0);
    Eigen::VectorXcd g = Eigen::VectorXcd::Zero(n);
    double norm = term.cwiseAbs().maxCoeff();
    int k = 0;
    while (norm >= opt.tol) {
        if (k >= opt.k_max) throw ConvergenceError("unitary_grid_trace: no convergence within k_max", norm);
        ++k;
        g += term;
        Eigen::VectorXcd next = L.triangularView<Eigen::Lower>() * term;
        next *= h;
        next -= (0.5 * h * term(0)) * lcol0;
        next -= (0.5 * h) * ldiag.cwiseProduct(term);
        term = std::move(next);
        norm = term.cwiseAbs().maxCoeff();
    }
    RawTrace r;
    r.orders = k;
    r.last = norm;
    r.u.resize(n);
    const cplx mi(0.0, -1.0);
    cplx u11 = 1.0, u21 = 0.0, u12 = 0.0;
    cplx d_prev = rotated_drive(ks, s0);
    r.u[0] = Unitary2::identity();
    for (int i = 1; i < n; ++i) {
        const cplx d = rotated_drive(ks, K.time(i));
        const cplx u11_prev = u11;
        u11 += 0.5 * h * (g(i - 1) + g(i));
        u21 += mi * 0.5 * h * (std::conj(d_prev) * u11_prev + std::conj(d) * u11);
        u12 += mi * 0.5 * h * (d_prev * std::conj(u11_prev) + d * std::conj(u11));
        r.u[i] = {u11, u12, u21, std::conj(u11)};
        d_prev = d;
    }
    return r;
}

}  // namespace

UnitaryTrace unitary_grid_trace(const KernelSpec& ks, double s0, double t1, int n, const GridOptions& opt) {
    if (n < 2) throw std::invalid_argument("unitary_grid_trace: n_points must be >= 2");
    UnitaryTrace out;
    out.times.resize(n);
    const double h = (t1 - s0) / (n - 1);
    for (int i = 0; i < n; ++i) out.times[i] = s0 + i * h;
    // Internal grid (n-1)*m+1, doubled until the unitarity defect and the change under
    // doubling both fit.
    std::vector<Unitary2> prev;
    for (int m = 1;; m *= 2) {
        const int ni = (n - 1) * m + 1;
        RawTrace coarse = raw_trace(ks, s0, t1, ni, opt);
        out.orders_used = coarse.orders;
        out.last_term_norm = coarse.last;
        out.self_check = 0.0;
        out.u.resize(n);
        if (opt.richardson) {
            RawTrace fine = raw_trace(ks, s0, t1, 2 * ni - 1, opt);
            out.orders_used = std::max(out.orders_used, fine.orders);
            for (int i = 0; i < n; ++i) {
                const Unitary2& f = fine.u[2 * i * m];
                const Unitary2& c = coarse.u[i * m];
                out.self_check = std::max(out.self_check, max_abs(f - c));
                out.u[i] = (1.0 / 3.0) * ((4.0 * f) - c);
            }
        } else {
            for (int i = 0; i < n; ++i) out.u[i] = coarse.u[i * m];
        }
        out.max_unitarity_defect = 0.0;
        for (const auto& u : out.u) out.max_unitarity_defect = std::max(out.max_unitarity_defect, u.unitarity_defect());
        out.refinement = m;
        if (!prev.empty()) {
            out.doubling_change = 0.0;
            for (int i = 0; i < n; ++i) out.doubling_change = std::max(out.doubling_change, max_abs(out.u[i] - prev[i]));
            if (out.max_unitarity_defect <= unitarity_tolerance(opt) && out.doubling_change <= unitarity_tolerance(opt))
                return out;
        }
        if (2 * m > opt.max_refine)
            throw ConvergenceError("unitary_grid_trace: no convergence at maximum refinement",
                                   std::max(out.max_unitarity_defect, out.doubling_change));
        prev = out.u;
    }
}

}  // namespace pathsum
