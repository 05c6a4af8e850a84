// Analytic series for U(t,s): tuple enumeration over divided-difference node lists,
// and a walk-sum evaluator of the same series for wide bands.

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <stdexcept>

#include "pathsum/propagator.hpp"

namespace pathsum {

NodeList node_list(const IndexTuple& tuple, double eps0, double omega) {
    const int k = tuple.order();
    if (k < 1 || static_cast<int>(tuple.n.size()) != k) throw std::invalid_argument("node_list: malformed tuple");
    std::vector<double> x{eps0 + tuple.n[0] * omega, 0.0};
    for (int j = 1; j < k; ++j) {
        const double shift = (tuple.m[j] - tuple.n[j]) * omega;
        for (double& v : x) v -= shift;
        x.push_back(eps0 + tuple.n[j] * omega);
        x.push_back(0.0);
    }
    return NodeList(std::move(x));
}

namespace {

const cplx kMinusIPow[4] = {{1, 0}, {0, -1}, {-1, 0}, {0, 1}};
const cplx kIPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};

double coeff_sum(const KernelSpec& ks) {
    double s = 0.0;
    for (const auto& c : ks.coeff) s += std::abs(c);
    return s;
}

double max_coeff(const KernelSpec& ks) {
    double m = 0.0;
    for (const auto& c : ks.coeff) m = std::max(m, std::abs(c));
    return m;
}

// Smallest K with (S u)^{2K} / (2K)! * (1 + S u) < tol * 1e-3.
int orders_needed(double S, double u, double tol) {
    const double x = S * u;
    double term = 1.0;
    for (int k = 1; k < 2000; ++k) {
        term *= x * x / ((2.0 * k - 1.0) * (2.0 * k));
        if (term * (1.0 + x) < tol * 1e-3) return k;
    }
    return 2000;
}

}  // namespace

double enumeration_cost(const KernelSpec& ks, double u, double tol) {
    const double B = static_cast<double>(ks.coeff.size());
    if (B == 0) return 0.0;
    const int K = orders_needed(coeff_sum(ks), u, tol);
    double total = 0.0, bk = 1.0;
    for (int k = 0; k <= K; ++k) {
        total += 2.0 * bk * (1.0 + B);
        bk *= B * B;
        if (total > 1e300) break;
    }
    return total;
}

cplx star_power_analytic(const KernelSpec& ks, int k, double t, double s, const SeriesOptions& opt) {
    if (k < 1) throw std::invalid_argument("star_power_analytic: k must be >= 1");
    if (t < s) throw std::invalid_argument("star_power_analytic: requires t >= s");
    const int B = static_cast<int>(ks.coeff.size());
    if (B == 0) return 0.0;
    const double count = std::pow(static_cast<double>(B), 2.0 * k);
    if (count > opt.tuple_budget) throw BudgetError("star_power_analytic: tuple count exceeds budget", count);

    const double u = t - s;
    const double jmax = max_coeff(ks);
    std::vector<double> cut(2 * k + 1);
    for (int d = 0; d <= 2 * k; ++d) cut[d] = opt.prune * std::pow(jmax, d);

    // Partial sums per first-level m index, reduced in fixed order afterwards.
    std::vector<cplx> partial(B, 0.0);
#pragma omp parallel for schedule(dynamic, 1)
    for (int m0 = 0; m0 < B; ++m0) {
        IndexTuple tup;
        tup.m.assign(k, 0);
        tup.n.assign(k, 0);
        cplx acc = 0.0;
        // depth d: even -> choose m_{d/2}, odd -> choose n_{d/2}
        auto rec = [&](auto&& self, int d, cplx coef) -> void {
            if (d == 2 * k) {
                int alpha = 0;
                for (int j = 0; j < k; ++j) alpha += tup.m[j] - tup.n[j];
                const NodeList nl = node_list(tup, ks.eps0, ks.omega);
                acc += coef * std::polar(1.0, alpha * ks.omega * t) *
                       exp_divided_difference_cached(std::span<const double>(nl.nodes()), u);
                return;
            }
            const int j = d / 2;
            const int first = d == 0 ? m0 : 0;
            const int last = d == 0 ? m0 + 1 : B;
            for (int q = first; q < last; ++q) {
                const cplx c = (d % 2 == 0) ? ks.coeff[q] : std::conj(ks.coeff[q]);
                const cplx next = coef * c;
                if (std::abs(next) < cut[d + 1]) continue;
                if (d % 2 == 0)
                    tup.m[j] = ks.index[q];
                else
                    tup.n[j] = ks.index[q];
                self(self, d + 1, next);
            }
        };
        rec(rec, 0, 1.0);
        partial[m0] = acc;
    }
    cplx sum = 0.0;
    for (const auto& p : partial) sum += p;
    return kMinusIPow[(2 * k - 1) % 4] * sum;
}

namespace {

// Column of U(t,s) started on level 1: returns {U11, U21} by tuple enumeration.
struct EnumColumn {
    cplx diag = 0.0, off = 0.0;
    int orders_used = 0;
    double last = 0.0;
};

EnumColumn enumerate_column(const KernelSpec& ks, double t, double s, int K, const SeriesOptions& opt) {
    const int B = static_cast<int>(ks.coeff.size());
    const double u = t - s;
    const double w = ks.omega, e0 = ks.eps0;
    const double jmax = max_coeff(ks);
    std::vector<double> cut(2 * K + 3);
    for (std::size_t d = 0; d < cut.size(); ++d) cut[d] = opt.prune * std::pow(jmax, static_cast<double>(d));

    // acc[m0][order] for diag (U11) and off (U21)
    std::vector<std::vector<cplx>> acc11(B, std::vector<cplx>(K + 1, 0.0)), acc21(B, std::vector<cplx>(K + 1, 0.0));

    auto emit = [&](std::vector<double>& nodes, int P, int order, cplx coef, std::vector<cplx>& a11, std::vector<cplx>& a21) {
        // U11 term: coef e^{i P w s} DD(nodes U {0})
        nodes.push_back(0.0);
        a11[order] += coef * std::polar(1.0, P * w * s) * exp_divided_difference_cached(std::span<const double>(nodes), u);
        // U21 terms: -conj(J_n') coef e^{i(Pw - f_n') s} DD((nodes U {0}) - f_n' U {0})
        std::vector<double> shifted(nodes.size() + 1);
        for (int q = 0; q < B; ++q) {
            const cplx c = -std::conj(ks.coeff[q]) * coef;
            if (std::abs(c) < cut[2 * order + 1]) continue;
            const double f = ks.freq[q];
            for (std::size_t i = 0; i < nodes.size(); ++i) shifted[i] = nodes[i] - f;
            shifted.back() = 0.0;
            a21[order] += c * std::polar(1.0, (P * w - f) * s) * exp_divided_difference_cached(std::span<const double>(shifted), u);
        }
        nodes.pop_back();
    };

    // order 0 has no first index; handled once outside the parallel loop
    std::vector<cplx> zero11(K + 1, 0.0), zero21(K + 1, 0.0);
    {
        std::vector<double> nodes;
        emit(nodes, 0, 0, 1.0, zero11, zero21);
    }

    if (K >= 1) {
#pragma omp parallel for schedule(dynamic, 1)
        for (int m0 = 0; m0 < B; ++m0) {
            std::vector<double> nodes;
            nodes.reserve(2 * K + 2);
            // depth d: even -> pick m (Q = P + m, node e0 + Q w), odd -> pick n (P = Q - n, node P w)
            auto rec = [&](auto&& self, int d, int P, int Q, cplx coef) -> void {
                if (d > 0 && d % 2 == 0) emit(nodes, P, d / 2, coef, acc11[m0], acc21[m0]);
                if (d == 2 * K) return;
                const int first = d == 0 ? m0 : 0;
                const int last = d == 0 ? m0 + 1 : B;
                for (int q = first; q < last; ++q) {
                    const bool pick_m = d % 2 == 0;
                    const cplx next = coef * (pick_m ? ks.coeff[q] : std::conj(ks.coeff[q]));
                    if (std::abs(next) < cut[d + 1]) continue;
                    if (pick_m) {
                        const int Qn = P + ks.index[q];
                        nodes.push_back(e0 + Qn * w);
                        self(self, d + 1, P, Qn, next);
                    } else {
                        const int Pn = Q - ks.index[q];
                        nodes.push_back(Pn * w);
                        self(self, d + 1, Pn, Q, next);
                    }
                    nodes.pop_back();
                }
            };
            rec(rec, 0, 0, 0, 1.0);
        }
    }

    EnumColumn col;
    std::vector<double> order_norm(K + 1, 0.0);
    for (int k = 0; k <= K; ++k) {
        cplx s11 = k == 0 ? zero11[0] : 0.0, s21 = zero21[k];
        for (int m0 = 0; m0 < B; ++m0) {
            s11 += acc11[m0][k];
            s21 += acc21[m0][k];
        }
        col.diag += s11;
        col.off += s21;
        order_norm[k] = std::max(k == 0 ? 0.0 : std::abs(s11), std::abs(s21));
    }
    col.orders_used = K;
    for (int k = K; k >= 1; --k)
        if (order_norm[k] >= opt.tol) {
            col.orders_used = k;
            break;
        }
    col.last = order_norm[K];
    if (col.last >= opt.tol) throw ConvergenceError("unitary_analytic: series did not converge within k_max", col.last);
    return col;
}

SeriesResult unitary_enumerate(const KernelSpec& ks, double t, double s, const SeriesOptions& opt) {
    SeriesResult r;
    r.method = "enumerate";
    if (ks.coeff.empty()) return r;
    const double u = t - s;
    const int K = orders_needed(coeff_sum(ks), u, opt.tol);
    if (K > opt.k_max) throw ConvergenceError("unitary_analytic: more than k_max orders required", static_cast<double>(K));
    const EnumColumn c1 = enumerate_column(ks, t, s, K, opt);
    const EnumColumn c2 = enumerate_column(ks.conjugate(), t, s, K, opt);
    r.u = {c1.diag, c2.off, c1.off, c2.diag};
    r.orders_used = std::max(c1.orders_used, c2.orders_used);
    r.last_term_norm = std::max(c1.last, c2.last);
    return r;
}

// ---- walk-sum evaluator ------------------------------------------------------
//
// U(t,s) = sum_n (-1)^n sum_walks prod(c) e^{i Lambda_n t} DD(0, -Lambda_1, ..., -Lambda_n; t-s),
// where a walk alternates conj(D) steps (Lambda -= f_l, c = conj J_l) and D steps
// (Lambda += f_l, c = J_l). Each lattice site carries the truncated power series
// sum_j h_j(u x_1, ..., u x_n) z^j over all walks ending there, which gives
// DD = sum_j i^{n+j} u^n h_j(u x) / (n+j)!.

// The site series depend on the slice length u only; the start time enters through
// e^{i Lambda t}. A SliceTable keeps the per-site sums so slices of equal length are
// evaluated by phase sums alone.
struct SiteSums {
    std::vector<double> lambda;
    std::vector<cplx> value;
};

struct SliceTable {
    double u = 0.0;
    SiteSums col[2][2];  // [start - 1][parity]
    int steps = 0;
};

struct Walker {
    const KernelSpec& ks;
    int lmin = 0, lmax = 0;
    std::vector<cplx> J;  // dense over [lmin, lmax]
    std::vector<double> Jabs;
    int L = 32;

    explicit Walker(const KernelSpec& k) : ks(k) {
        lmin = *std::min_element(ks.index.begin(), ks.index.end());
        lmax = *std::max_element(ks.index.begin(), ks.index.end());
        J.assign(lmax - lmin + 1, 0.0);
        for (std::size_t q = 0; q < ks.index.size(); ++q) J[ks.index[q] - lmin] = ks.coeff[q];
        for (cplx c : J) Jabs.push_back(std::abs(c));
    }

    // Site sums for the column of U(s+u, s) starting on level `start` (1 or 2);
    // parity 0 feeds U_start,start and parity 1 feeds U_other,start.
    void column(int start, double u, SiteSums out[2], int& steps) const {
        const double w = ks.omega, e0 = ks.eps0;
        std::map<int, cplx> acc[2];
        acc[0][0] = 1.0;
        int lo = 0, hi = 0;
        std::vector<cplx> cur(L, 0.0);
        cur[0] = 1.0;
        std::vector<double> cur_max{1.0};
        std::vector<double> inv_fact(L + 400);
        inv_fact[0] = 1.0;
        for (std::size_t i = 1; i < inv_fact.size(); ++i) inv_fact[i] = inv_fact[i - 1] / static_cast<double>(i);

        int n = 0;
        for (;;) {
            ++n;
            if (n + L >= static_cast<int>(inv_fact.size())) throw ConvergenceError("walk-sum: too many steps in one slice", 0.0);
            // start 1: odd steps go down (conj D, site p -> p - l); start 2: odd steps go up (D, p -> p + l)
            const bool up = (start == 1) ? (n % 2 == 0) : (n % 2 == 1);
            const int level_e = (n % 2 == 0) ? 0 : (start == 1 ? -1 : 1);
            const int nlo = up ? lo + lmin : lo - lmax;
            const int nhi = up ? hi + lmax : hi - lmin;
            const int ns = nhi - nlo + 1;
            std::vector<cplx> nxt(static_cast<std::size_t>(ns) * L, 0.0);
            std::vector<double> site_max(ns, 0.0);
            const double cur_top = *std::max_element(cur_max.begin(), cur_max.end());
            const double cut = 1e-26 * cur_top;

            double mag = 0.0;
            for (int q = nlo; q <= nhi; ++q) {
                cplx* dst = &nxt[static_cast<std::size_t>(q - nlo) * L];
                bool any = false;
                for (int l = lmin; l <= lmax; ++l) {
                    const int p = up ? q - l : q + l;
                    if (p < lo || p > hi) continue;
                    if (Jabs[l - lmin] * cur_max[p - lo] <= cut) continue;
                    const cplx c = J[l - lmin];
                    const cplx cc = (up ? c : std::conj(c)) * (-u);
                    const cplx* src = &cur[static_cast<std::size_t>(p - lo) * L];
                    for (int j = 0; j < L; ++j) dst[j] += cc * src[j];
                    any = true;
                }
                if (!any) continue;
                const double lambda = level_e * e0 + q * w;
                const double y = -u * lambda;
                for (int j = 1; j < L; ++j) dst[j] += y * dst[j - 1];
                cplx v = 0.0;
                double m = 0.0, mag_q = 0.0;
                for (int j = 0; j < L; ++j) {
                    v += kIPow[(n + j) % 4] * inv_fact[n + j] * dst[j];
                    m = std::max(m, std::abs(dst[j]));
                    mag_q += std::abs(dst[j]) * inv_fact[n + j];
                }
                site_max[q - nlo] = m;
                mag += mag_q;
                // truncation of the z-series: geometric tail past the last kept term
                const double r = std::abs(y) / (n + L);
                const double last = std::abs(dst[L - 1]) * inv_fact[n + L - 1];
                if (m > 0.0 && (r >= 0.5 ? last > 0.0 && mag_q > 1e-20 : last * r / (1.0 - r) > 1e-17))
                    throw std::logic_error("walk-sum: slice too long for the series length");
                acc[n % 2][q] += v;
            }

            // trim negligible edge sites
            const double gmax = *std::max_element(site_max.begin(), site_max.end());
            int a = 0, b = ns - 1;
            while (a < b && site_max[a] <= 1e-24 * gmax) ++a;
            while (b > a && site_max[b] <= 1e-24 * gmax) --b;
            lo = nlo + a;
            hi = nlo + b;
            cur.assign(nxt.begin() + static_cast<std::ptrdiff_t>(a) * L, nxt.begin() + static_cast<std::ptrdiff_t>(b + 1) * L);
            cur_max.assign(site_max.begin() + a, site_max.begin() + b + 1);
            if ((n >= 2 && mag < 1e-18) || gmax == 0.0) break;
        }
        steps = n;
        for (int par = 0; par < 2; ++par) {
            const int level_e = par == 0 ? 0 : (start == 1 ? -1 : 1);
            out[par].lambda.clear();
            out[par].value.clear();
            for (const auto& [q, v] : acc[par]) {
                out[par].lambda.push_back(level_e * e0 + q * w);
                out[par].value.push_back(v);
            }
        }
    }

    SliceTable table(double u) const {
        SliceTable tab;
        tab.u = u;
        int s1 = 0, s2 = 0;
        column(1, u, tab.col[0], s1);
        column(2, u, tab.col[1], s2);
        tab.steps = std::max(s1, s2);
        return tab;
    }

    static cplx phase_sum(const SiteSums& ss, double t) {
        cplx acc = 0.0;
        for (std::size_t i = 0; i < ss.value.size(); ++i) acc += std::polar(1.0, ss.lambda[i] * t) * ss.value[i];
        return acc;
    }

    static Unitary2 slice(const SliceTable& tab, double s) {
        const double t = s + tab.u;
        return {phase_sum(tab.col[0][0], t), phase_sum(tab.col[1][1], t), phase_sum(tab.col[0][1], t),
                phase_sum(tab.col[1][0], t)};
    }

    // Slice length keeping u * |node| small and u * sum|J| <= 1/2.
    double max_slice() const {
        double fmax = 0.0;
        for (double f : ks.freq) fmax = std::max(fmax, std::abs(f));
        const double reach = std::max(std::abs(lmin), std::abs(lmax));
        const double xmax = std::max(fmax, 2.0 * reach * ks.omega) + ks.omega;
        return std::min(2.0 / xmax, 0.5 / coeff_sum(ks));
    }
};

}  // namespace

SeriesResult unitary_analytic(const KernelSpec& ks, double t, double s, const SeriesOptions& opt) {
    if (!(opt.tol > 0.0)) throw std::invalid_argument("unitary_analytic: tol must be positive");
    if (t < s) throw std::invalid_argument("unitary_analytic: requires t >= s");
    SeriesResult r;
    if (ks.coeff.empty() || t == s) {
        r.method = "trivial";
        return r;
    }
    SeriesMethod m = opt.method;
    if (m == SeriesMethod::Auto)
        m = enumeration_cost(ks, t - s, opt.tol) <= opt.tuple_budget ? SeriesMethod::Enumerate : SeriesMethod::WalkSum;
    if (m == SeriesMethod::Enumerate) {
        const double cost = enumeration_cost(ks, t - s, opt.tol);
        if (cost > opt.tuple_budget) throw BudgetError("unitary_analytic: tuple count exceeds budget", cost);
        return unitary_enumerate(ks, t, s, opt);
    }
    const std::vector<double> times{s, t};
    SeriesOptions walk = opt;
    walk.method = SeriesMethod::WalkSum;
    const SeriesTrace tr = unitary_analytic_trace(ks, times, walk);
    r.u = tr.u.back();
    r.orders_used = tr.orders_used;
    r.method = tr.method;
    return r;
}

SeriesTrace unitary_analytic_trace(const KernelSpec& ks, std::span<const double> times, const SeriesOptions& opt) {
    SeriesTrace tr;
    if (times.empty()) return tr;
    for (std::size_t i = 1; i < times.size(); ++i)
        if (times[i] < times[i - 1]) throw std::invalid_argument("unitary_analytic_trace: times must ascend");
    tr.u.assign(times.size(), Unitary2::identity());
    if (ks.coeff.empty()) {
        tr.method = "trivial";
        return tr;
    }
    SeriesMethod m = opt.method;
    const double span_len = times.back() - times.front();
    // Long traces reuse walk-sum slice tables; enumeration redoes every node list per time.
    if (m == SeriesMethod::Auto)
        m = times.size() <= 16 && enumeration_cost(ks, span_len, opt.tol) * static_cast<double>(times.size()) <=
                                      opt.tuple_budget
                ? SeriesMethod::Enumerate
                : SeriesMethod::WalkSum;
    if (m == SeriesMethod::Enumerate) {
        tr.method = "enumerate";
        for (std::size_t i = 1; i < times.size(); ++i) {
            const SeriesResult r = unitary_enumerate(ks, times[i], times[0], opt);
            tr.u[i] = r.u;
            tr.orders_used = std::max(tr.orders_used, r.orders_used);
        }
        return tr;
    }
    tr.method = "walk-sum";
    const Walker walker(ks);
    const double hmax = walker.max_slice();
    std::map<double, SliceTable> tables;  // keyed by slice length
    Unitary2 total = Unitary2::identity();
    int max_steps = 0;
    for (std::size_t i = 1; i < times.size(); ++i) {
        const double a = times[i - 1], b = times[i];
        if (b > a) {
            const int ns = std::max(1, static_cast<int>(std::ceil((b - a) / hmax)));
            const double h = (b - a) / ns;
            auto it = tables.lower_bound(h * (1.0 - 1e-15));
            if (it == tables.end() || std::abs(it->first - h) > 1e-15 * h) {
                if (tables.size() > 64) tables.clear();
                it = tables.emplace(h, walker.table(h)).first;
            }
            const SliceTable& tab = it->second;
            max_steps = std::max(max_steps, tab.steps);
            for (int q = 0; q < ns; ++q) total = Walker::slice(tab, a + q * h) * total;
        }
        tr.u[i] = total;
    }
    tr.orders_used = (max_steps + 1) / 2;
    if (tr.orders_used > opt.k_max) throw ConvergenceError("unitary_analytic_trace: more than k_max orders per slice", tr.orders_used);
    return tr;
}

}  // namespace pathsum
