#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace pathsum {

using cplx = std::complex<double>;
inline constexpr cplx I{0.0, 1.0};
inline constexpr double kPi = 3.14159265358979323846;

// 2x2 complex matrix, row-major entries. Used for U(t,s) and for Hamiltonians.
struct Unitary2 {
    cplx u11{1.0}, u12{0.0}, u21{0.0}, u22{1.0};

    static Unitary2 identity() { return {}; }
    static Unitary2 zero() { return {0.0, 0.0, 0.0, 0.0}; }

    Unitary2 adjoint() const {
        return {std::conj(u11), std::conj(u21), std::conj(u12), std::conj(u22)};
    }
    cplx trace() const { return u11 + u22; }
    cplx det() const { return u11 * u22 - u12 * u21; }

    // max-norm of U^dagger U - I
    double unitarity_defect() const;
};

Unitary2 operator*(const Unitary2& a, const Unitary2& b);
Unitary2 operator+(const Unitary2& a, const Unitary2& b);
Unitary2 operator-(const Unitary2& a, const Unitary2& b);
Unitary2 operator*(cplx c, const Unitary2& a);
double max_abs(const Unitary2& a);

// Error types. SpecError names the offending key; ConvergenceError carries the last-term norm.
struct SpecError : std::runtime_error {
    std::string key;
    SpecError(const std::string& k, const std::string& msg)
        : std::runtime_error(k.empty() ? msg : k + ": " + msg), key(k) {}
};

struct ConvergenceError : std::runtime_error {
    double last_norm;
    ConvergenceError(const std::string& msg, double norm)
        : std::runtime_error(msg + " (last term norm " + std::to_string(norm) + ")"), last_norm(norm) {}
};

struct BudgetError : std::runtime_error {
    double required;
    BudgetError(const std::string& msg, double req)
        : std::runtime_error(msg + " (required " + std::to_string(req) + ")"), required(req) {}
};

}  // namespace pathsum
