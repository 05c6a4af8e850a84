#pragma once

#include <span>
#include <vector>

#include "pathsum/kernel.hpp"

namespace pathsum {

enum class Frame { Lab, Rotated };

struct OracleOptions {
    double tol = 1e-10;
    int initial_steps = 32;       // per unit time
    long max_steps = 1L << 26;    // per interval
    double band_threshold = 1e-12;
};

struct OracleResult {
    Unitary2 u;
    long steps = 0;
    double doubling_difference = 0.0;
    double unitarity_defect = 0.0;
};

// Classical RK4 with step halving until the step-doubling difference and the unitarity
// defect are both below tol.
OracleResult integrate_schrodinger(const DriveSpec& spec, double s, double t, Frame frame, const OracleOptions& opt = {});

// U(times[i], times[0]), each interval integrated independently and composed.
std::vector<Unitary2> integrate_trace(const DriveSpec& spec, std::span<const double> times, Frame frame,
                                      const OracleOptions& opt = {});

// Direct nested trapezoid quadrature of the k-fold star power (k <= 3) with n intervals.
cplx nested_quadrature_star_power(const KernelSpec& ks, int k, double t, double s, int n);

// Romberg extrapolation over n, 2n, 4n, ... until successive estimates agree to tol.
struct QuadratureResult {
    cplx value;
    int n_final = 0;
    double change = 0.0;
};
QuadratureResult nested_quadrature_extrapolated(const KernelSpec& ks, int k, double t, double s, int n0 = 32,
                                                double tol = 1e-11, int max_levels = 7);

// Long-time average of |U12(t,0)|^2 from the monodromy eigenprojectors (lab frame).
double long_time_average_probability(const DriveSpec& spec, int samples_per_period = 256, const OracleOptions& opt = {});

}  // namespace pathsum
