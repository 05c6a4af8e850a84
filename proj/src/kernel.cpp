#include "pathsum/kernel.hpp"

#include <cmath>

#include "pathsum/divdiff.hpp"

namespace pathsum {

KernelSpec::KernelSpec(GbfTable table, double eps0_, double omega_)
    : gbf(std::move(table)), eps0(eps0_), omega(omega_), band(gbf.band()) {
    for (const auto& [l, c] : gbf.coeffs) {
        if (c == 0.0) continue;
        index.push_back(l);
        coeff.push_back(c);
        freq.push_back(eps0 + l * omega);
        if (!std::isfinite(freq.back())) throw std::invalid_argument("KernelSpec: non-finite f_l");
    }
}

KernelSpec KernelSpec::from_drive(const DriveSpec& spec, double threshold) {
    return KernelSpec(build_table(spec, threshold), spec.eps0, spec.omega);
}

KernelSpec KernelSpec::conjugate() const {
    GbfTable t;
    t.l_min = -gbf.l_max;
    t.l_max = -gbf.l_min;
    for (const auto& [l, c] : gbf.coeffs) t.coeffs[-l] = std::conj(c);
    t.raw_gbf = gbf.raw_gbf;
    return KernelSpec(std::move(t), -eps0, omega);
}

KernelSpec KernelSpec::pruned(double rel) const {
    GbfTable t = gbf;
    const double cut = rel * gbf.max_modulus();
    for (auto& [l, c] : t.coeffs)
        if (std::abs(c) < cut) c = 0.0;
    return KernelSpec(std::move(t), eps0, omega);
}

cplx rotated_drive(const KernelSpec& ks, double t) {
    cplx d = 0.0;
    for (std::size_t i = 0; i < ks.coeff.size(); ++i) d += ks.coeff[i] * std::polar(1.0, ks.freq[i] * t);
    return d;
}

namespace {

void require_causal(double t, double s, const char* who) {
    if (t < s) throw std::invalid_argument(std::string(who) + ": requires t >= s");
}

double sinc(double x) { return x == 0.0 ? 1.0 : std::sin(x) / x; }

void require_resonant(const KernelSpec& ks, int alpha, const char* who) {
    if (std::abs(ks.eps0 + alpha * ks.omega) > 1e-12 * std::max(1.0, std::abs(ks.eps0)))
        throw std::invalid_argument(std::string(who) + ": eps0 must equal -alpha*omega");
}

}  // namespace

cplx kernel_at(const KernelSpec& ks, double t, double s) {
    require_causal(t, s, "kernel_at");
    const double u = t - s;
    cplx inner = 0.0;
    for (std::size_t n = 0; n < ks.coeff.size(); ++n) {
        const double f = ks.freq[n];
        inner += std::conj(ks.coeff[n]) * std::polar(1.0, -0.5 * f * (t + s)) * (u * sinc(0.5 * f * u));
    }
    return rotated_drive(ks, t) * inner;
}

cplx kernel_at_dd(const KernelSpec& ks, double t, double s) {
    require_causal(t, s, "kernel_at_dd");
    const double u = t - s;
    cplx inner = 0.0, outer = 0.0;
    for (std::size_t n = 0; n < ks.coeff.size(); ++n) {
        const double nodes[2] = {ks.freq[n], 0.0};
        inner += std::conj(ks.coeff[n]) * std::polar(1.0, -ks.index[n] * ks.omega * t) *
                 exp_divided_difference(std::span<const double>(nodes, 2), u);
    }
    for (std::size_t m = 0; m < ks.coeff.size(); ++m)
        outer += ks.coeff[m] * std::polar(1.0, ks.index[m] * ks.omega * t);
    return cplx(0.0, -1.0) * outer * inner;
}

KernelParts kernel_split(const KernelSpec& ks, double t, double s, int alpha) {
    require_causal(t, s, "kernel_split");
    require_resonant(ks, alpha, "kernel_split");
    const double u = t - s;
    const cplx ja = ks.gbf.at(alpha);
    KernelParts p{std::norm(ja) * u, 0.0, 0.0};
    for (std::size_t m = 0; m < ks.coeff.size(); ++m) {
        if (ks.index[m] == alpha) continue;
        p.cr += std::conj(ja) * ks.coeff[m] * std::polar(1.0, (ks.index[m] - alpha) * ks.omega * t) * u;
    }
    cplx inner = 0.0;
    for (std::size_t n = 0; n < ks.coeff.size(); ++n) {
        if (ks.index[n] == alpha) continue;
        const double f = ks.freq[n];
        inner += std::conj(ks.coeff[n]) * std::polar(1.0, -0.5 * f * (t + s)) * (u * sinc(0.5 * f * u));
    }
    p.or_ = rotated_drive(ks, t) * inner;
    return p;
}

cplx kernel_average(const KernelSpec& ks, double T) {
    cplx sum = 0.0;
    for (std::size_t n = 0; n < ks.coeff.size(); ++n)
        for (std::size_t m = 0; m < ks.coeff.size(); ++m) {
            const double d = (ks.index[m] - ks.index[n]) * ks.omega;
            const double nodes[4] = {ks.freq[m], d, d, 0.0};
            sum += std::conj(ks.coeff[n]) * ks.coeff[m] * exp_divided_difference(std::span<const double>(nodes, 4), T);
        }
    return cplx(0.0, 2.0 / (T * T)) * sum;
}

cplx cr_average(const KernelSpec& ks, double T, int alpha) {
    require_resonant(ks, alpha, "cr_average");
    cplx sum = 0.0;
    for (std::size_t m = 0; m < ks.coeff.size(); ++m) {
        if (ks.index[m] == alpha) continue;
        const double a = (ks.index[m] - alpha) * ks.omega;
        sum += std::norm(ks.coeff[m]) * cplx(2.0 / (a * a * T), 1.0 / a);
    }
    return sum;
}

}  // namespace pathsum
