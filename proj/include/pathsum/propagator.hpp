#pragma once

#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "pathsum/divdiff.hpp"
#include "pathsum/kernel.hpp"

namespace pathsum {

// Samples F(t_i, t_j) for t_j <= t_i on a uniform grid; strictly upper part stays zero.
struct TwoTimeGrid {
    double s0 = 0.0;
    double t1 = 1.0;
    int n_points = 2;
    Eigen::MatrixXcd values;

    TwoTimeGrid() = default;
    TwoTimeGrid(double s0, double t1, int n_points);
    double h() const { return (t1 - s0) / (n_points - 1); }
    double time(int i) const { return s0 + i * h(); }
    bool same_grid(const TwoTimeGrid& o) const;
};

// Kernel sampled on the triangle, O(B) per point.
TwoTimeGrid kernel_grid(const KernelSpec& ks, double s0, double t1, int n_points);

TwoTimeGrid star_product_grid(const TwoTimeGrid& F, const TwoTimeGrid& G);

struct NeumannResult {
    TwoTimeGrid greens;  // g = sum_{k>=1} (-K)^{*k}; the Dirac part is implicit
    int orders_used = 0;
    double last_term_norm = 0.0;
};
NeumannResult neumann_greens(const TwoTimeGrid& kernel, double tol, int k_max);

struct GridOptions {
    double tol = 1e-8;       // Neumann truncation
    int k_max = 40;
    bool richardson = true;  // combine n and 2n-1 point grids
    double unitarity_tol = -1.0;  // defaults to 10*tol
    int max_refine = 16;          // trace only: internal grid refinement cap
};

struct UnitaryGrid {
    TwoTimeGrid u11, u12, u21, u22;
    int orders_used = 0;
    double last_term_norm = 0.0;
    double max_unitarity_defect = 0.0;
    double self_check = 0.0;  // max |raw(n) - raw(2n-1)| on shared points
    Unitary2 at(int i, int j) const { return {u11.values(i, j), u12.values(i, j), u21.values(i, j), u22.values(i, j)}; }
};

UnitaryGrid unitary_grid(const KernelSpec& ks, double s0, double t1, int n_points, const GridOptions& opt = {});
UnitaryGrid unitary_grid(const DriveSpec& spec, double s0, double t1, int n_points, const GridOptions& opt = {});

// s = s0 column only: U(t_i, s0) for i = 0..n-1. O(n^2) per Neumann order.
struct UnitaryTrace {
    std::vector<double> times;
    std::vector<Unitary2> u;
    int orders_used = 0;
    double last_term_norm = 0.0;
    double max_unitarity_defect = 0.0;
    double self_check = 0.0;
    int refinement = 1;            // internal points per output interval
    double doubling_change = 0.0;  // max change against the previous refinement
};
UnitaryTrace unitary_grid_trace(const KernelSpec& ks, double s0, double t1, int n_points, const GridOptions& opt = {});

// ---- analytic series -------------------------------------------------------

struct IndexTuple {
    std::vector<int> m, n;
    int order() const { return static_cast<int>(m.size()); }
};

NodeList node_list(const IndexTuple& tuple, double eps0, double omega);

enum class SeriesMethod { Auto, Enumerate, WalkSum };

struct SeriesOptions {
    double tol = 1e-8;
    int k_max = 40;
    double tuple_budget = 1e6;
    SeriesMethod method = SeriesMethod::Auto;
    double prune = 1e-16;  // relative coefficient-product cutoff
};

cplx star_power_analytic(const KernelSpec& ks, int k, double t, double s, const SeriesOptions& opt = {});

struct SeriesResult {
    Unitary2 u;
    int orders_used = 0;
    double last_term_norm = 0.0;
    std::string method;
};

SeriesResult unitary_analytic(const KernelSpec& ks, double t, double s, const SeriesOptions& opt = {});

// U(times[i], times[0]) for an ascending list of times.
struct SeriesTrace {
    std::vector<Unitary2> u;
    int orders_used = 0;
    std::string method;
};
SeriesTrace unitary_analytic_trace(const KernelSpec& ks, std::span<const double> times, const SeriesOptions& opt = {});

// Tuple count needed to reach tol by enumeration (for budgeting).
double enumeration_cost(const KernelSpec& ks, double u, double tol);

// ---- observables -----------------------------------------------------------

// U_lab(t, s) = U0(t) U_rot(t, s) U0(s)^dagger, U0(t) = diag(e^{-i theta/2}, e^{i theta/2}),
// theta(t) = eps0 t + Phi_ac(t).
Unitary2 rotated_to_lab(const DriveSpec& spec, const Unitary2& u_rot, double t, double s);

double transition_probability(const Unitary2& U);
double reported_probability(const Unitary2& U);

struct Quasienergies {
    double eps_plus = 0.0;
    double eps_minus = 0.0;
    double unitarity_defect = 0.0;
};
Quasienergies quasienergies(const Unitary2& U_period, double T);

struct HeffResult {
    Unitary2 h;
    double hermiticity_defect = 0.0;
    double doubling_change = 0.0;
    int n_quad = 0;
};
HeffResult effective_hamiltonian(const KernelSpec& ks, double T, int n_quad, const GridOptions& opt = {});
HeffResult effective_hamiltonian(const DriveSpec& spec, double T, int n_quad, const GridOptions& opt = {});

}  // namespace pathsum
