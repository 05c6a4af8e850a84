#include "pathsum/presets.hpp"

#include <functional>
#include <map>

namespace pathsum::presets {

DriveSpec fig1a() {
    DriveSpec d;
    d.eps0 = 1.0;
    d.d_coeffs = {{0, 0.5}};
    return d;
}

DriveSpec fig1b() {
    DriveSpec d;
    d.eps0 = 1.0;
    d.d_coeffs = {{-1, 0.25}, {1, 0.25}};
    return d;
}

DriveSpec fig1c() {
    DriveSpec d;
    d.eps0 = 1.0;
    d.a_coeffs = {{1, 15.0}};
    d.d_coeffs = {{0, 0.5}};
    return d;
}

DriveSpec fig1d() {
    DriveSpec d;
    d.eps0 = 10.0;
    d.a_coeffs = {{1, 10.0}, {2, 20.0}};
    d.d_coeffs = {{1, 0.25}, {2, 0.25}};
    return d;
}

DriveSpec fig2a() {
    DriveSpec d;
    d.eps0 = 1.0;
    d.d_coeffs = {{1, 3.0}};
    return d;
}

DriveSpec fig2d() {
    DriveSpec d;
    d.eps0 = 1.0;
    d.a_coeffs = {{1, 13.0}, {3, 18.0}};
    d.d_coeffs = {{0, 1.5}};
    return d;
}

DriveSpec fig2g() {
    DriveSpec d;
    d.eps0 = 1.0;
    d.a_coeffs = {{1, 13.0}};
    d.d_coeffs = {{0, 1.5}, {1, 1.5}, {2, 1.5}, {3, 1.5}};
    return d;
}

DriveSpec fig3a() {
    DriveSpec d;
    d.eps0 = 1.0;
    d.a_coeffs = {{1, 0.0}, {2, 0.0}};
    d.d_coeffs = {{0, 1.0}};
    return d;
}

DriveSpec fig4a() {
    DriveSpec d;
    d.eps0 = 1.05;
    d.a_coeffs = {{1, 0.0}, {2, 0.0}};
    d.d_coeffs = {{0, 0.25}};
    return d;
}

DriveSpec weak_resonant() {
    DriveSpec d;
    d.eps0 = -1.0;
    d.d_coeffs = {{-1, 0.1}, {1, 0.1}};
    return d;
}

namespace {

const std::map<std::string, std::function<DriveSpec()>>& table() {
    static const std::map<std::string, std::function<DriveSpec()>> t = {
        {"fig1a", fig1a}, {"fig1b", fig1b}, {"fig1c", fig1c}, {"fig1d", fig1d}, {"fig2a", fig2a},
        {"fig2d", fig2d}, {"fig2g", fig2g}, {"fig3a", fig3a}, {"fig4a", fig4a}, {"weak_resonant", weak_resonant}};
    return t;
}

SweepSpec a1a2_sweep(DriveSpec base, int r1, int r2) {
    SweepSpec s;
    s.base = std::move(base);
    s.axis1 = {'A', 1};
    s.axis2 = {'A', 2};
    s.range1 = {-40.0, 40.0, r1};
    s.range2 = {-40.0, 40.0, r2};
    return s;
}

}  // namespace

std::vector<std::string> names() {
    std::vector<std::string> out;
    for (const auto& [k, v] : table()) out.push_back(k);
    return out;
}

DriveSpec by_name(const std::string& name) {
    auto it = table().find(name);
    if (it == table().end()) throw SpecError("preset", "unknown preset '" + name + "'");
    return it->second();
}

SweepSpec fig3a_sweep(int r1, int r2) { return a1a2_sweep(fig3a(), r1, r2); }
SweepSpec fig4a_sweep(int r1, int r2) { return a1a2_sweep(fig4a(), r1, r2); }

}  // namespace pathsum::presets
