#include "pathsum/gbf.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>

#include <fftw3.h>

namespace pathsum {

cplx GbfTable::at(int l) const {
    auto it = coeffs.find(l);
    return it == coeffs.end() ? cplx(0.0) : it->second;
}

double GbfTable::max_modulus() const {
    double m = 0.0;
    for (const auto& [l, c] : coeffs) m = std::max(m, std::abs(c));
    return m;
}

std::vector<double> bessel_j_sequence(double x, int n_max) {
    std::vector<double> out(n_max + 1, 0.0);
    if (x == 0.0) {
        out[0] = 1.0;
        return out;
    }
    const double ax = std::abs(x);
    const int top = std::max(n_max, static_cast<int>(ax));
    int start = top + 20 + static_cast<int>(std::sqrt(40.0 * top));
    start += start % 2;

    std::vector<double> j(start + 2, 0.0);
    j[start + 1] = 0.0;
    j[start] = 1e-300;
    double norm = 0.0;
    for (int k = start; k >= 1; --k) {
        j[k - 1] = (2.0 * k / ax) * j[k] - j[k + 1];
        if (std::abs(j[k - 1]) > 1e250) {
            for (int i = k - 1; i <= start; ++i) j[i] *= 1e-250;
        }
    }
    norm = j[0];
    for (int k = 2; k <= start; k += 2) norm += 2.0 * j[k];
    for (int k = 0; k <= n_max; ++k) {
        double v = j[k] / norm;
        if (x < 0.0 && (k % 2)) v = -v;
        out[k] = v;
    }
    return out;
}

namespace {

std::mutex fftw_plan_mutex;

// Carson-style spread of exp(i Phi_ac) in units of omega_eps.
double bandwidth_estimate(const DriveSpec& spec) {
    const double we = spec.omega_eps();
    double bw = 0.0;
    for (const auto& h : spec.a_coeffs) bw += h.index * (std::abs(h.amplitude) / (h.index * we) + 1.0);
    for (const auto& h : spec.b_coeffs) bw += h.index * (std::abs(h.amplitude) / (h.index * we) + 1.0);
    return bw;
}

std::vector<cplx> sample_dft(const DriveSpec& spec, int n) {
    std::vector<cplx> in(n), out(n);
    const double we = spec.omega_eps();
    for (int j = 0; j < n; ++j) {
        const double t = 2.0 * kPi * j / (n * we);
        in[j] = std::polar(1.0, phase_antiderivative(spec, t));
    }
    fftw_plan plan;
    {
        std::lock_guard lock(fftw_plan_mutex);
        plan = fftw_plan_dft_1d(n, reinterpret_cast<fftw_complex*>(in.data()),
                                reinterpret_cast<fftw_complex*>(out.data()), FFTW_FORWARD, FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    {
        std::lock_guard lock(fftw_plan_mutex);
        fftw_destroy_plan(plan);
    }
    for (auto& v : out) v /= static_cast<double>(n);
    return out;
}

cplx dft_at(const std::vector<cplx>& c, int p) {
    const int n = static_cast<int>(c.size());
    return c[((p % n) + n) % n];
}

}  // namespace

CoeffMap gbf_coefficients(const DriveSpec& spec, int p_max) {
    if (p_max < 0) throw std::invalid_argument("gbf_coefficients: p_max must be >= 0");
    CoeffMap g;
    if (!spec.has_longitudinal_drive()) {
        for (int p = -p_max; p <= p_max; ++p) g[p] = p == 0 ? 1.0 : 0.0;
        return g;
    }
    const double need = 8.0 * (p_max + bandwidth_estimate(spec));
    int n = 64;
    while (n < need) n *= 2;
    const auto coarse = sample_dft(spec, n);
    const auto fine = sample_dft(spec, 2 * n);
    double diff = 0.0;
    for (int p = -p_max; p <= p_max; ++p) {
        const cplx v = dft_at(fine, p);
        diff = std::max(diff, std::abs(v - dft_at(coarse, p)));
        g[p] = v;
    }
    if (diff > 1e-10) throw ConvergenceError("gbf_coefficients: grid doubling changed a coefficient", diff);
    return g;
}

CoeffMap gbf_via_bessel_convolution(const DriveSpec& spec, int p_max) {
    if (p_max < 0) throw std::invalid_argument("gbf_via_bessel_convolution: p_max must be >= 0");
    const double we = spec.omega_eps();

    // Each factor is a sparse sequence over p; running product kept on a dense offset array.
    std::vector<cplx> acc{1.0};
    int acc_lo = 0;

    auto convolve = [&](double z, int step, bool sine) {
        if (z == 0.0) return;
        const double az = std::abs(z);
        int kmax = static_cast<int>(az + 20.0 + 10.0 * std::cbrt(az));
        std::vector<double> jk;
        for (;;) {
            jk = bessel_j_sequence(z, kmax);
            if (std::abs(jk[kmax]) < 1e-14 && std::abs(jk[kmax - 1]) < 1e-14) break;
            kmax *= 2;
            if (kmax > 100000) throw ConvergenceError("bessel factor series did not converge", std::abs(jk.back()));
        }
        // factor[k] at p = k*step, k in [-kmax, kmax]
        std::vector<cplx> fac(2 * kmax + 1);
        const cplx phase = sine ? std::polar(1.0, z) : cplx(1.0);
        static const cplx kMinusIPow[4] = {{1, 0}, {0, -1}, {-1, 0}, {0, 1}};
        for (int k = -kmax; k <= kmax; ++k) {
            const int ak = std::abs(k);
            double v = jk[ak];
            if (k < 0 && (ak % 2)) v = -v;
            cplx c = v;
            if (sine) c *= phase * kMinusIPow[((k % 4) + 4) % 4];
            fac[k + kmax] = c;
        }
        const int n_acc = static_cast<int>(acc.size());
        const int new_lo = acc_lo - kmax * step;
        std::vector<cplx> out(n_acc + 2 * kmax * step, 0.0);
        for (int i = 0; i < n_acc; ++i) {
            if (acc[i] == 0.0) continue;
            for (int k = 0; k <= 2 * kmax; ++k) out[i + k * step] += acc[i] * fac[k];
        }
        acc = std::move(out);
        acc_lo = new_lo;
    };

    for (const auto& h : spec.a_coeffs) convolve(h.amplitude / (h.index * we), h.index, false);
    for (const auto& h : spec.b_coeffs) convolve(h.amplitude / (h.index * we), h.index, true);

    CoeffMap g;
    for (int p = -p_max; p <= p_max; ++p) {
        const int i = p - acc_lo;
        g[p] = (i >= 0 && i < static_cast<int>(acc.size())) ? acc[i] : cplx(0.0);
    }
    return g;
}

GbfTable weighted_coefficients(const DriveSpec& spec, Band band) {
    if (band.l_min > band.l_max) throw std::invalid_argument("weighted_coefficients: empty band");
    const int a = spec.eps_mult, b = spec.delta_mult;
    int p_max = 0;
    for (const auto& d : spec.d_coeffs) {
        p_max = std::max(p_max, std::abs(band.l_min - d.index * b) / a + 1);
        p_max = std::max(p_max, std::abs(band.l_max - d.index * b) / a + 1);
    }
    GbfTable tab;
    tab.l_min = band.l_min;
    tab.l_max = band.l_max;
    tab.raw_gbf = gbf_coefficients(spec, p_max);
    for (int l = band.l_min; l <= band.l_max; ++l) {
        cplx s = 0.0;
        for (const auto& d : spec.d_coeffs) {
            const int r = l - d.index * b;
            if (r % a != 0) continue;
            const int p = r / a;
            if (std::abs(p) > p_max) continue;
            s += 0.5 * d.amplitude * tab.raw_gbf.at(p);
        }
        tab.coeffs[l] = s;
    }
    return tab;
}

GbfTable weighted_coefficients(const DriveSpec& spec, int table_band) {
    if (table_band < 0) throw std::invalid_argument("weighted_coefficients: table_band must be >= 0");
    return weighted_coefficients(spec, Band{-table_band, table_band});
}

namespace {

// Returns the band and a table over a superset of it.
std::pair<Band, GbfTable> find_band(const DriveSpec& spec, double threshold) {
    if (!(threshold > 0.0 && threshold < 1.0)) throw std::invalid_argument("truncation_band: threshold must be in (0,1)");
    bool any = false;
    int kmax = 0;
    for (const auto& d : spec.d_coeffs) {
        if (d.amplitude != 0.0) any = true;
        kmax = std::max(kmax, std::abs(d.index));
    }
    if (!any) {
        GbfTable t = weighted_coefficients(spec, Band{0, 0});
        return {Band{0, 0}, t};
    }
    const double we = spec.omega_eps();
    double mod = 0.0;
    for (const auto& h : spec.a_coeffs) mod += std::abs(h.amplitude) / (h.index * we);
    for (const auto& h : spec.b_coeffs) mod += std::abs(h.amplitude) / (h.index * we);
    const int n_harm = static_cast<int>(spec.a_coeffs.size() + spec.b_coeffs.size());
    int L = spec.eps_mult * static_cast<int>(std::ceil(mod + n_harm)) + spec.delta_mult * kmax;
    L = std::max(L, 4);
    const int margin = std::max(2, spec.eps_mult + spec.delta_mult);
    for (;;) {
        GbfTable t = weighted_coefficients(spec, Band{-L - margin, L + margin});
        if (t.max_modulus() == 0.0) return {Band{0, 0}, t};
        const double cut = threshold * t.max_modulus();
        int lo = 0, hi = 0;
        bool found = false;
        for (const auto& [l, c] : t.coeffs) {
            if (std::abs(c) >= cut) {
                if (!found) lo = l;
                hi = l;
                found = true;
            }
        }
        if (lo > -L && hi < L) return {Band{lo, hi}, t};
        if (L > 200000) throw ConvergenceError("truncation_band: band did not close", static_cast<double>(L));
        L *= 2;
    }
}

}  // namespace

Band truncation_band(const DriveSpec& spec, double threshold) { return find_band(spec, threshold).first; }

GbfTable build_table(const DriveSpec& spec, double threshold) {
    auto [band, wide] = find_band(spec, threshold);
    GbfTable t;
    t.l_min = band.l_min;
    t.l_max = band.l_max;
    t.raw_gbf = std::move(wide.raw_gbf);
    for (int l = band.l_min; l <= band.l_max; ++l) t.coeffs[l] = wide.at(l);
    return t;
}

}  // namespace pathsum
