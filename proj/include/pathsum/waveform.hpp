#pragma once

#include <filesystem>
#include <vector>

#include <nlohmann/json.hpp>

#include "pathsum/types.hpp"

namespace pathsum {

struct Harmonic {
    int index;
    double amplitude;
};

struct TransverseHarmonic {
    int index;
    cplx amplitude;
};

// H(t) = 1/2 [[eps(t), Delta(t)], [conj Delta(t), -eps(t)]]
//   eps(t)   = eps0 + sum A_n cos(n a w t) + sum B_m sin(m a w t)
//   Delta(t) = sum_k Delta_k exp(i k b w t)
struct DriveSpec {
    double omega = 1.0;
    double eps0 = 0.0;
    int eps_mult = 1;
    int delta_mult = 1;
    std::vector<Harmonic> a_coeffs;
    std::vector<Harmonic> b_coeffs;
    std::vector<TransverseHarmonic> d_coeffs;

    double period() const { return 2.0 * kPi / omega; }
    double omega_eps() const { return eps_mult * omega; }
    double omega_delta() const { return delta_mult * omega; }
    bool has_longitudinal_drive() const;

    // throws SpecError
    void validate() const;
};

double epsilon_at(const DriveSpec& spec, double t);
cplx delta_at(const DriveSpec& spec, double t);
Unitary2 hamiltonian_at(const DriveSpec& spec, double t);
double phase_antiderivative(const DriveSpec& spec, double t);

DriveSpec drive_from_json(const nlohmann::json& j);
nlohmann::json drive_to_json(const DriveSpec& spec);
DriveSpec load_drive(const std::filesystem::path& path);

}  // namespace pathsum
