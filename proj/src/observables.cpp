#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "pathsum/propagator.hpp"

namespace pathsum {

Unitary2 rotated_to_lab(const DriveSpec& spec, const Unitary2& u, double t, double s) {
    const double th_t = spec.eps0 * t + phase_antiderivative(spec, t);
    const double th_s = spec.eps0 * s + phase_antiderivative(spec, s);
    const cplx a = std::polar(1.0, -0.5 * (th_t - th_s)), b = std::polar(1.0, -0.5 * (th_t + th_s));
    return {a * u.u11, b * u.u12, std::conj(b) * u.u21, std::conj(a) * u.u22};
}

double transition_probability(const Unitary2& U) { return std::norm(U.u12); }

double reported_probability(const Unitary2& U) { return std::clamp(transition_probability(U), 0.0, 1.0); }

Quasienergies quasienergies(const Unitary2& U, double T) {
    if (!(T > 0.0)) throw std::invalid_argument("quasienergies: T must be positive");
    Quasienergies q;
    q.unitarity_defect = U.unitarity_defect();
    if (q.unitarity_defect >= 1e-6) throw ConvergenceError("quasienergies: monodromy matrix is not unitary", q.unitarity_defect);
    const cplx half_tr = 0.5 * U.trace();
    // det - (Tr/2)^2 sits near the positive real axis for unitary U, away from the branch cut
    const cplx root = I * std::sqrt(U.det() - half_tr * half_tr);
    const cplx lp = half_tr + root, lm = half_tr - root;
    if (std::abs(std::abs(lp) - 1.0) > 1e-6 || std::abs(std::abs(lm) - 1.0) > 1e-6)
        throw ConvergenceError("quasienergies: eigenvalue off the unit circle", std::abs(std::abs(lp) - 1.0));
    const double w = 2.0 * kPi / T;
    auto reduce = [w](double e) {
        while (e >= 0.5 * w) e -= w;
        while (e < -0.5 * w) e += w;
        return e;
    };
    q.eps_plus = reduce(-std::arg(lp) / T);
    q.eps_minus = reduce(-std::arg(lm) / T);
    return q;
}

namespace {

Unitary2 heff_quadrature(const KernelSpec& ks, double T, int n, const GridOptions& opt) {
    const UnitaryTrace tr = unitary_grid_trace(ks, 0.0, T, n, opt);
    const double h = T / (n - 1);
    Unitary2 acc = Unitary2::zero();
    for (int i = 0; i < n; ++i) {
        const cplx d = rotated_drive(ks, tr.times[i]);
        const Unitary2 H{0.0, d, std::conj(d), 0.0};
        const Unitary2 v = tr.u[i].adjoint() * H * tr.u[i];
        const double wgt = (i == 0 || i == n - 1) ? 0.5 * h : h;
        acc = acc + cplx(wgt) * v;
    }
    return cplx(1.0 / T) * acc;
}

}  // namespace

HeffResult effective_hamiltonian(const KernelSpec& ks, double T, int n_quad, const GridOptions& opt) {
    if (n_quad < 64) throw std::invalid_argument("effective_hamiltonian: n_quad must be >= 64");
    const Unitary2 coarse = heff_quadrature(ks, T, n_quad, opt);
    const Unitary2 fine = heff_quadrature(ks, T, 2 * n_quad - 1, opt);
    HeffResult r;
    r.h = cplx(1.0 / 3.0) * (cplx(4.0) * fine - coarse);
    r.n_quad = 2 * n_quad - 1;
    r.doubling_change = max_abs(fine - coarse);
    r.hermiticity_defect = max_abs(r.h - r.h.adjoint());
    const double scale = std::max(1.0, max_abs(fine));
    if (r.doubling_change > 1e-4 * scale)
        throw ConvergenceError("effective_hamiltonian: quadrature not converged under doubling", r.doubling_change);
    return r;
}

HeffResult effective_hamiltonian(const DriveSpec& spec, double T, int n_quad, const GridOptions& opt) {
    return effective_hamiltonian(KernelSpec::from_drive(spec), T, n_quad, opt);
}

}  // namespace pathsum
