#pragma once

#include <string>
#include <vector>

#include "pathsum/gbf.hpp"

namespace pathsum {

// Default: detuning f_l = eps0 + l*omega and Omega_l = sqrt(4|J_l|^2 + f_l^2), which is what
// H_RWA = [[0, J_l], [conj J_l, 0]] in the channel frame produces.
// paper_sign uses (l*omega - eps0); paper_rabi_scale uses Omega_l = sqrt(|J_l|^2 + det^2)
// with amplitude |J_l|^2 / Omega_l^2.
struct RwaOptions {
    bool paper_sign = false;
    bool paper_rabi_scale = false;
};

Unitary2 rwa_hamiltonian(const GbfTable& gbf, int l);

double rwa_detuning(int l, double eps0, double omega, const RwaOptions& opt = {});
double rwa_rabi_frequency(cplx J, double detuning, const RwaOptions& opt = {});

double rwa_probability(const GbfTable& gbf, double eps0, double omega, double t, const RwaOptions& opt = {});
double rwa_average(const GbfTable& gbf, double eps0, double omega, const RwaOptions& opt = {});

struct AxisId {
    char kind = 'A';  // 'A' cosine amplitude, 'B' sine amplitude, 'D' real part of Delta_k, 'E' eps0
    int index = 1;
    std::string str() const;
    static AxisId parse(const std::string& s);
};

struct Range {
    double lo = 0.0, hi = 1.0;
    int count = 2;
    double value(int i) const { return lo + (hi - lo) * i / (count - 1); }
};

struct SweepSpec {
    DriveSpec base;
    AxisId axis1, axis2;
    Range range1, range2;
    void validate() const;
};

// {"template": DriveSpec, "axis1": "A1", "axis2": "A2", "range1": [lo, hi(, count)], "range2": [...]}
SweepSpec sweep_from_json(const nlohmann::json& j);
nlohmann::json sweep_to_json(const SweepSpec& s);

DriveSpec apply_axis(const DriveSpec& base, const AxisId& axis, double value);

// values[i2 * range1.count + i1]
struct MapResult {
    std::vector<double> axis1, axis2, values;
    int n1 = 0, n2 = 0;
    double at(int i1, int i2) const { return values[static_cast<std::size_t>(i2) * n1 + i1]; }
};

MapResult rabi_map(const SweepSpec& sweep, int l);
MapResult avg_map(const SweepSpec& sweep, const RwaOptions& opt = {});

}  // namespace pathsum
