#pragma once

#include <vector>

#include "pathsum/gbf.hpp"

namespace pathsum {

struct KernelSpec {
    GbfTable gbf;
    double eps0 = 0.0;
    double omega = 1.0;
    Band band;

    // Nonzero band entries in ascending l, with f_l = eps0 + l*omega.
    std::vector<int> index;
    std::vector<cplx> coeff;
    std::vector<double> freq;

    KernelSpec() = default;
    KernelSpec(GbfTable table, double eps0, double omega);
    static KernelSpec from_drive(const DriveSpec& spec, double threshold = 1e-12);

    double period() const { return 2.0 * kPi / omega; }
    // Same kernel for the conjugate drive: J'_l = conj(J_{-l}), eps0' = -eps0.
    KernelSpec conjugate() const;
    // Keep only coefficients with |J_l| >= rel * max|J|.
    KernelSpec pruned(double rel) const;
};

// D(t) = sum_l J_l exp(i f_l t), the rotated-frame off-diagonal drive.
cplx rotated_drive(const KernelSpec& ks, double t);

cplx kernel_at(const KernelSpec& ks, double t, double s);
cplx kernel_at_dd(const KernelSpec& ks, double t, double s);

struct KernelParts {
    cplx rwa, cr, or_;
};
KernelParts kernel_split(const KernelSpec& ks, double t, double s, int alpha);

cplx kernel_average(const KernelSpec& ks, double T);
cplx cr_average(const KernelSpec& ks, double T, int alpha);

}  // namespace pathsum
