#pragma once

#include <cmath>
#include <vector>

#include "pathsum/types.hpp"

namespace testing_util {

inline std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = i + 1 == n ? b : a + (b - a) * i / (n - 1);
    return v;
}

// Ordinary Bessel J_p for any integer p.
inline double bessel(int p, double x) {
    const double v = std::cyl_bessel_j(std::abs(p), x);
    return (p < 0 && (-p) % 2 == 1) ? -v : v;
}

// Trapezoid over [a, b] with n intervals.
template <class F>
auto trapezoid(F&& f, double a, double b, int n) {
    const double h = (b - a) / n;
    auto acc = 0.5 * (f(a) + f(b));
    for (int i = 1; i < n; ++i) acc += f(a + i * h);
    return acc * h;
}

}  // namespace testing_util
