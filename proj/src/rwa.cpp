#include "pathsum/rwa.hpp"

#include <cmath>
#include <exception>
#include <stdexcept>

namespace pathsum {

Unitary2 rwa_hamiltonian(const GbfTable& gbf, int l) {
    if (l < gbf.l_min || l > gbf.l_max) throw std::out_of_range("rwa_hamiltonian: l outside the table band");
    const cplx j = gbf.at(l);
    return {0.0, j, std::conj(j), 0.0};
}

double rwa_detuning(int l, double eps0, double omega, const RwaOptions& opt) {
    return opt.paper_sign ? l * omega - eps0 : eps0 + l * omega;
}

double rwa_rabi_frequency(cplx J, double det, const RwaOptions& opt) {
    const double coupling = opt.paper_rabi_scale ? std::norm(J) : 4.0 * std::norm(J);
    return std::sqrt(coupling + det * det);
}

namespace {

double amplitude(cplx J, double omega_l, const RwaOptions& opt) {
    if (omega_l == 0.0) return 0.0;
    const double coupling = opt.paper_rabi_scale ? std::norm(J) : 4.0 * std::norm(J);
    return coupling / (omega_l * omega_l);
}

}  // namespace

double rwa_probability(const GbfTable& gbf, double eps0, double omega, double t, const RwaOptions& opt) {
    double p = 0.0;
    for (const auto& [l, J] : gbf.coeffs) {
        if (J == 0.0) continue;
        const double W = rwa_rabi_frequency(J, rwa_detuning(l, eps0, omega, opt), opt);
        p += amplitude(J, W, opt) * (1.0 - std::cos(W * t));
    }
    return 0.5 * p;
}

double rwa_average(const GbfTable& gbf, double eps0, double omega, const RwaOptions& opt) {
    double p = 0.0;
    for (const auto& [l, J] : gbf.coeffs) {
        if (J == 0.0) continue;
        p += amplitude(J, rwa_rabi_frequency(J, rwa_detuning(l, eps0, omega, opt), opt), opt);
    }
    return 0.5 * p;
}

std::string AxisId::str() const {
    if (kind == 'E') return "eps0";
    return std::string(1, kind) + std::to_string(index);
}

AxisId AxisId::parse(const std::string& s) {
    if (s == "eps0") return {'E', 0};
    if (s.size() < 2 || (s[0] != 'A' && s[0] != 'B' && s[0] != 'D'))
        throw SpecError("axis", "expected A<n>, B<m>, D<k> or eps0, got '" + s + "'");
    try {
        std::size_t pos = 0;
        const int idx = std::stoi(s.substr(1), &pos);
        if (pos != s.size() - 1) throw std::invalid_argument(s);
        return {s[0], idx};
    } catch (const std::logic_error&) {
        throw SpecError("axis", "bad harmonic index in '" + s + "'");
    }
}

DriveSpec apply_axis(const DriveSpec& base, const AxisId& axis, double value) {
    DriveSpec d = base;
    auto set = [&](auto& list) {
        for (auto& h : list)
            if (h.index == axis.index) {
                h.amplitude = value;
                return;
            }
        throw SpecError("axis", "swept harmonic " + axis.str() + " is not present in the template");
    };
    switch (axis.kind) {
        case 'A': set(d.a_coeffs); break;
        case 'B': set(d.b_coeffs); break;
        case 'D': set(d.d_coeffs); break;
        case 'E': d.eps0 = value; break;
        default: throw SpecError("axis", "unknown axis kind");
    }
    return d;
}

void SweepSpec::validate() const {
    base.validate();
    if (range1.count < 2 || range2.count < 2) throw SpecError("res", "sweep counts must be >= 2");
    apply_axis(base, axis1, range1.lo);
    apply_axis(base, axis2, range2.lo);
}

namespace {

Range range_from_json(const nlohmann::json& j, const std::string& key) {
    if (!j.is_array() || j.size() < 2 || j.size() > 3) throw SpecError(key, "expected [lo, hi] or [lo, hi, count]");
    Range r;
    for (std::size_t i = 0; i < j.size(); ++i)
        if (!j[i].is_number()) throw SpecError(key + "[" + std::to_string(i) + "]", "expected a number");
    r.lo = j[0].get<double>();
    r.hi = j[1].get<double>();
    r.count = 81;
    if (j.size() == 3) {
        if (!j[2].is_number_integer()) throw SpecError(key + "[2]", "expected an integer");
        r.count = j[2].get<int>();
        if (r.count < 2) throw SpecError(key + "[2]", "count must be >= 2");
    }
    if (!std::isfinite(r.lo) || !std::isfinite(r.hi) || r.lo >= r.hi) throw SpecError(key, "need finite lo < hi");
    return r;
}

}  // namespace

SweepSpec sweep_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw SpecError("", "sweep spec must be a JSON object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        const auto& k = it.key();
        if (k != "template" && k != "axis1" && k != "axis2" && k != "range1" && k != "range2")
            throw SpecError(k, "unknown key");
    }
    for (const char* k : {"template", "axis1", "axis2", "range1", "range2"})
        if (!j.contains(k)) throw SpecError(k, "missing");
    SweepSpec s;
    try {
        s.base = drive_from_json(j["template"]);
    } catch (const SpecError& e) {
        std::string msg = e.what();
        if (!e.key.empty()) msg = msg.substr(e.key.size() + 2);
        throw SpecError(e.key.empty() ? "template" : "template." + e.key, msg);
    }
    for (const char* k : {"axis1", "axis2"})
        if (!j[k].is_string()) throw SpecError(k, "expected a string");
    s.axis1 = AxisId::parse(j["axis1"].get<std::string>());
    s.axis2 = AxisId::parse(j["axis2"].get<std::string>());
    s.range1 = range_from_json(j["range1"], "range1");
    s.range2 = range_from_json(j["range2"], "range2");
    return s;
}

nlohmann::json sweep_to_json(const SweepSpec& s) {
    return {{"template", drive_to_json(s.base)},
            {"axis1", s.axis1.str()},
            {"axis2", s.axis2.str()},
            {"range1", {s.range1.lo, s.range1.hi, s.range1.count}},
            {"range2", {s.range2.lo, s.range2.hi, s.range2.count}}};
}

namespace {

template <class F>
MapResult fill_map(const SweepSpec& sweep, F&& cell) {
    sweep.validate();
    MapResult m;
    m.n1 = sweep.range1.count;
    m.n2 = sweep.range2.count;
    for (int i = 0; i < m.n1; ++i) m.axis1.push_back(sweep.range1.value(i));
    for (int i = 0; i < m.n2; ++i) m.axis2.push_back(sweep.range2.value(i));
    m.values.assign(static_cast<std::size_t>(m.n1) * m.n2, 0.0);
    const int total = m.n1 * m.n2;
    std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 4)
    for (int c = 0; c < total; ++c) {
        try {
            const int i1 = c % m.n1, i2 = c / m.n1;
            const DriveSpec d = apply_axis(apply_axis(sweep.base, sweep.axis1, m.axis1[i1]), sweep.axis2, m.axis2[i2]);
            m.values[c] = cell(d);
        } catch (...) {
#pragma omp critical(pathsum_map_failure)
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
    return m;
}

}  // namespace

MapResult rabi_map(const SweepSpec& sweep, int l) {
    return fill_map(sweep, [l](const DriveSpec& d) { return std::abs(weighted_coefficients(d, Band{l, l}).at(l)); });
}

MapResult avg_map(const SweepSpec& sweep, const RwaOptions& opt) {
    return fill_map(sweep, [&opt](const DriveSpec& d) { return rwa_average(build_table(d), d.eps0, d.omega, opt); });
}

}  // namespace pathsum
