#pragma once

#include <map>
#include <vector>

#include "pathsum/waveform.hpp"

namespace pathsum {

struct Band {
    int l_min = 0;
    int l_max = 0;
    int size() const { return l_max - l_min + 1; }
    bool contains(int l) const { return l >= l_min && l <= l_max; }
    bool operator==(const Band&) const = default;
};

// Weighted coefficients J_l on the base-omega grid, plus the raw GBF coefficients G_p
// of exp(i Phi_ac) on the omega_eps grid.
struct GbfTable {
    int l_min = 0;
    int l_max = 0;
    std::map<int, cplx> coeffs;
    std::map<int, cplx> raw_gbf;

    Band band() const { return {l_min, l_max}; }
    cplx at(int l) const;
    double max_modulus() const;
};

using CoeffMap = std::map<int, cplx>;

// J_0..J_{n_max} of real argument x, Miller downward recurrence.
std::vector<double> bessel_j_sequence(double x, int n_max);

CoeffMap gbf_coefficients(const DriveSpec& spec, int p_max);
CoeffMap gbf_via_bessel_convolution(const DriveSpec& spec, int p_max);

GbfTable weighted_coefficients(const DriveSpec& spec, int table_band);
GbfTable weighted_coefficients(const DriveSpec& spec, Band band);

Band truncation_band(const DriveSpec& spec, double threshold);

// weighted_coefficients over truncation_band(threshold)
GbfTable build_table(const DriveSpec& spec, double threshold = 1e-12);

}  // namespace pathsum
