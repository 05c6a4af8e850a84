#include "pathsum/waveform.hpp"

#include <cmath>
#include <fstream>
#include <set>

namespace pathsum {

double Unitary2::unitarity_defect() const {
    const Unitary2 p = adjoint() * (*this);
    return std::max({std::abs(p.u11 - 1.0), std::abs(p.u12), std::abs(p.u21), std::abs(p.u22 - 1.0)});
}

Unitary2 operator*(const Unitary2& a, const Unitary2& b) {
    return {a.u11 * b.u11 + a.u12 * b.u21, a.u11 * b.u12 + a.u12 * b.u22,
            a.u21 * b.u11 + a.u22 * b.u21, a.u21 * b.u12 + a.u22 * b.u22};
}
Unitary2 operator+(const Unitary2& a, const Unitary2& b) {
    return {a.u11 + b.u11, a.u12 + b.u12, a.u21 + b.u21, a.u22 + b.u22};
}
Unitary2 operator-(const Unitary2& a, const Unitary2& b) {
    return {a.u11 - b.u11, a.u12 - b.u12, a.u21 - b.u21, a.u22 - b.u22};
}
Unitary2 operator*(cplx c, const Unitary2& a) { return {c * a.u11, c * a.u12, c * a.u21, c * a.u22}; }
double max_abs(const Unitary2& a) {
    return std::max({std::abs(a.u11), std::abs(a.u12), std::abs(a.u21), std::abs(a.u22)});
}

bool DriveSpec::has_longitudinal_drive() const {
    for (const auto& h : a_coeffs)
        if (h.amplitude != 0.0) return true;
    for (const auto& h : b_coeffs)
        if (h.amplitude != 0.0) return true;
    return false;
}

void DriveSpec::validate() const {
    if (!(omega > 0.0) || !std::isfinite(omega)) throw SpecError("omega", "must be a positive finite number");
    if (!std::isfinite(eps0)) throw SpecError("eps0", "must be finite");
    if (eps_mult < 1) throw SpecError("eps_mult", "must be >= 1");
    if (delta_mult < 1) throw SpecError("delta_mult", "must be >= 1");
    auto check = [](const auto& list, const char* key, bool positive) {
        std::set<int> seen;
        for (const auto& h : list) {
            if (positive && h.index < 1) throw SpecError(key, "harmonic index must be positive");
            if (!seen.insert(h.index).second)
                throw SpecError(key, "duplicate harmonic index " + std::to_string(h.index));
            if (!std::isfinite(std::abs(h.amplitude))) throw SpecError(key, "amplitude must be finite");
        }
    };
    check(a_coeffs, "a_coeffs", true);
    check(b_coeffs, "b_coeffs", true);
    check(d_coeffs, "d_coeffs", false);
}

double epsilon_at(const DriveSpec& spec, double t) {
    const double we = spec.omega_eps();
    double e = spec.eps0;
    for (const auto& h : spec.a_coeffs) e += h.amplitude * std::cos(h.index * we * t);
    for (const auto& h : spec.b_coeffs) e += h.amplitude * std::sin(h.index * we * t);
    return e;
}

cplx delta_at(const DriveSpec& spec, double t) {
    const double wd = spec.omega_delta();
    cplx d = 0.0;
    for (const auto& h : spec.d_coeffs) d += h.amplitude * std::polar(1.0, h.index * wd * t);
    return d;
}

Unitary2 hamiltonian_at(const DriveSpec& spec, double t) {
    const double e = 0.5 * epsilon_at(spec, t);
    const cplx d = 0.5 * delta_at(spec, t);
    return {e, d, std::conj(d), -e};
}

double phase_antiderivative(const DriveSpec& spec, double t) {
    const double we = spec.omega_eps();
    double phi = 0.0;
    for (const auto& h : spec.a_coeffs) phi += h.amplitude / (h.index * we) * std::sin(h.index * we * t);
    for (const auto& h : spec.b_coeffs) phi += h.amplitude / (h.index * we) * (1.0 - std::cos(h.index * we * t));
    return phi;
}

namespace {

double get_number(const nlohmann::json& j, const std::string& key) {
    if (!j.is_number()) throw SpecError(key, "expected a number");
    return j.get<double>();
}

int get_int(const nlohmann::json& j, const std::string& key) {
    if (!j.is_number_integer()) {
        if (j.is_number() && std::floor(j.get<double>()) == j.get<double>()) return static_cast<int>(j.get<double>());
        throw SpecError(key, "expected an integer");
    }
    return j.get<int>();
}

void reject_unknown(const nlohmann::json& obj, std::initializer_list<const char*> allowed, const std::string& where) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool ok = false;
        for (const char* a : allowed) ok = ok || it.key() == a;
        if (!ok) throw SpecError(where + it.key(), "unknown key");
    }
}

}  // namespace

DriveSpec drive_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw SpecError("", "drive spec must be a JSON object");
    reject_unknown(j, {"omega", "eps0", "eps_mult", "delta_mult", "a_coeffs", "b_coeffs", "d_coeffs"}, "");
    DriveSpec s;
    if (j.contains("omega")) s.omega = get_number(j["omega"], "omega");
    if (j.contains("eps0")) s.eps0 = get_number(j["eps0"], "eps0");
    if (j.contains("eps_mult")) s.eps_mult = get_int(j["eps_mult"], "eps_mult");
    if (j.contains("delta_mult")) s.delta_mult = get_int(j["delta_mult"], "delta_mult");

    auto harmonics = [&](const char* key, const char* idx, const char* amp) {
        std::vector<Harmonic> out;
        if (!j.contains(key)) return out;
        const auto& arr = j[key];
        if (!arr.is_array()) throw SpecError(key, "expected an array");
        for (std::size_t i = 0; i < arr.size(); ++i) {
            const std::string where = std::string(key) + "[" + std::to_string(i) + "].";
            const auto& e = arr[i];
            if (!e.is_object()) throw SpecError(where, "expected an object");
            reject_unknown(e, {idx, amp}, where);
            if (!e.contains(idx)) throw SpecError(where + idx, "missing");
            if (!e.contains(amp)) throw SpecError(where + amp, "missing");
            out.push_back({get_int(e[idx], where + idx), get_number(e[amp], where + amp)});
        }
        return out;
    };
    s.a_coeffs = harmonics("a_coeffs", "n", "A");
    s.b_coeffs = harmonics("b_coeffs", "m", "B");

    if (j.contains("d_coeffs")) {
        const auto& arr = j["d_coeffs"];
        if (!arr.is_array()) throw SpecError("d_coeffs", "expected an array");
        for (std::size_t i = 0; i < arr.size(); ++i) {
            const std::string where = "d_coeffs[" + std::to_string(i) + "].";
            const auto& e = arr[i];
            if (!e.is_object()) throw SpecError(where, "expected an object");
            reject_unknown(e, {"k", "re", "im"}, where);
            if (!e.contains("k")) throw SpecError(where + "k", "missing");
            const double re = e.contains("re") ? get_number(e["re"], where + "re") : 0.0;
            const double im = e.contains("im") ? get_number(e["im"], where + "im") : 0.0;
            s.d_coeffs.push_back({get_int(e["k"], where + "k"), cplx(re, im)});
        }
    }
    s.validate();
    return s;
}

nlohmann::json drive_to_json(const DriveSpec& s) {
    nlohmann::json j;
    j["omega"] = s.omega;
    j["eps0"] = s.eps0;
    j["eps_mult"] = s.eps_mult;
    j["delta_mult"] = s.delta_mult;
    j["a_coeffs"] = nlohmann::json::array();
    for (const auto& h : s.a_coeffs) j["a_coeffs"].push_back({{"n", h.index}, {"A", h.amplitude}});
    j["b_coeffs"] = nlohmann::json::array();
    for (const auto& h : s.b_coeffs) j["b_coeffs"].push_back({{"m", h.index}, {"B", h.amplitude}});
    j["d_coeffs"] = nlohmann::json::array();
    for (const auto& h : s.d_coeffs)
        j["d_coeffs"].push_back({{"k", h.index}, {"re", h.amplitude.real()}, {"im", h.amplitude.imag()}});
    return j;
}

DriveSpec load_drive(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw SpecError("", "cannot open spec file " + path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw SpecError("", path.string() + ": " + e.what());
    }
    try {
        return drive_from_json(j);
    } catch (const SpecError& e) {
        SpecError err("", path.string() + ": " + e.what());
        err.key = e.key;
        throw err;
    }
}

}  // namespace pathsum
