#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "pathsum/oracle.hpp"
#include "pathsum/presets.hpp"
#include "pathsum/propagator.hpp"
#include "pathsum/rwa.hpp"

namespace py = pybind11;
using namespace pathsum;

namespace {

// Specs cross the boundary as JSON text; the Python wrapper serializes dicts.
DriveSpec parse_drive(const std::string& text) { return drive_from_json(nlohmann::json::parse(text)); }

py::array_t<cplx> to_array(const Unitary2& u) {
    py::array_t<cplx> a({2, 2});
    auto m = a.mutable_unchecked<2>();
    m(0, 0) = u.u11, m(0, 1) = u.u12, m(1, 0) = u.u21, m(1, 1) = u.u22;
    return a;
}

Unitary2 from_array(const py::array_t<cplx>& a) {
    if (a.ndim() != 2 || a.shape(0) != 2 || a.shape(1) != 2) throw std::invalid_argument("expected a 2x2 array");
    auto m = a.unchecked<2>();
    return {m(0, 0), m(0, 1), m(1, 0), m(1, 1)};
}

py::array_t<cplx> evolve(const std::string& spec, const std::vector<double>& times, const std::string& engine,
                         const std::string& frame, double tol, int k_max) {
    const DriveSpec d = parse_drive(spec);
    if (frame != "lab" && frame != "rotated") throw SpecError("frame", "expected lab or rotated");
    if (times.size() < 2) throw std::invalid_argument("evolve: need at least two times");
    std::vector<Unitary2> u;
    bool lab_done = false;
    {
        py::gil_scoped_release release;
        if (engine == "oracle") {
            OracleOptions o;
            o.tol = std::min(1e-10, 1e-2 * tol);
            u = integrate_trace(d, times, frame == "lab" ? Frame::Lab : Frame::Rotated, o);
            lab_done = true;
        } else {
            const KernelSpec ks = KernelSpec::from_drive(d);
            if (engine == "series") {
                SeriesOptions o;
                o.tol = tol;
                o.k_max = k_max;
                u = unitary_analytic_trace(ks, times, o).u;
            } else if (engine == "grid") {
                const double h = (times.back() - times.front()) / (times.size() - 1);
                for (std::size_t i = 0; i < times.size(); ++i)
                    if (std::abs(times[i] - (times.front() + i * h)) > 1e-9 * std::max(1.0, std::abs(times.back())))
                        throw std::invalid_argument("evolve: the grid engine needs uniformly spaced times");
                GridOptions o;
                o.tol = tol;
                o.k_max = k_max;
                u = unitary_grid_trace(ks, times.front(), times.back(), static_cast<int>(times.size()), o).u;
            } else {
                throw SpecError("engine", "expected series, grid or oracle");
            }
        }
        if (frame == "lab" && !lab_done)
            for (std::size_t i = 0; i < u.size(); ++i) u[i] = rotated_to_lab(d, u[i], times[i], times.front());
    }
    py::array_t<cplx> out({static_cast<py::ssize_t>(u.size()), py::ssize_t{2}, py::ssize_t{2}});
    auto m = out.mutable_unchecked<3>();
    for (py::ssize_t i = 0; i < static_cast<py::ssize_t>(u.size()); ++i) {
        m(i, 0, 0) = u[i].u11, m(i, 0, 1) = u[i].u12, m(i, 1, 0) = u[i].u21, m(i, 1, 1) = u[i].u22;
    }
    return out;
}

py::dict map_to_dict(const MapResult& r) {
    py::array_t<double> v({r.n2, r.n1});
    std::copy(r.values.begin(), r.values.end(), v.mutable_data());
    py::dict d;
    d["axis1"] = r.axis1;
    d["axis2"] = r.axis2;
    d["values"] = v;
    return d;
}

RwaOptions rwa_opts(bool paper_sign, bool paper_rabi_scale) { return {paper_sign, paper_rabi_scale}; }

}  // namespace

PYBIND11_MODULE(_pathsum, m) {
    m.doc() = "Exact evolution of periodically driven two-level systems";
    m.attr("__version__") = PATHSUM_VERSION;

    py::register_exception<SpecError>(m, "SpecError", PyExc_ValueError);
    py::register_exception<ConvergenceError>(m, "ConvergenceError", PyExc_RuntimeError);
    py::register_exception<BudgetError>(m, "BudgetError", PyExc_RuntimeError);
    py::register_exception<nlohmann::json::exception>(m, "JsonError", PyExc_ValueError);

    m.def("normalize_spec", [](const std::string& s) { return drive_to_json(parse_drive(s)).dump(); });
    m.def("preset_names", &presets::names);
    m.def("preset", [](const std::string& name) { return drive_to_json(presets::by_name(name)).dump(); });

    m.def("hamiltonian", [](const std::string& s, double t) { return to_array(hamiltonian_at(parse_drive(s), t)); });

    m.def("gbf_coefficients", [](const std::string& s, int p_max) { return gbf_coefficients(parse_drive(s), p_max); });
    m.def("gbf_via_bessel_convolution",
          [](const std::string& s, int p_max) { return gbf_via_bessel_convolution(parse_drive(s), p_max); });
    m.def("weighted_coefficients", [](const std::string& s, double threshold) {
        return build_table(parse_drive(s), threshold).coeffs;
    });

    m.def("exp_divided_difference",
          [](const std::vector<double>& nodes, double tau) { return exp_divided_difference(NodeList(nodes), tau); });

    m.def("kernel", [](const std::string& s, double t, double s0, const std::string& form) {
        const KernelSpec ks = KernelSpec::from_drive(parse_drive(s));
        if (form == "sinc") return kernel_at(ks, t, s0);
        if (form == "dd") return kernel_at_dd(ks, t, s0);
        throw SpecError("form", "expected sinc or dd");
    });

    m.def("evolve", &evolve, py::arg("spec"), py::arg("times"), py::arg("engine") = "series",
          py::arg("frame") = "lab", py::arg("tol") = 1e-8, py::arg("k_max") = 40);

    m.def("transition_probability", [](const py::array_t<cplx>& u) { return transition_probability(from_array(u)); });

    m.def("quasienergies", [](const py::array_t<cplx>& u, double T) {
        const Quasienergies q = quasienergies(from_array(u), T);
        return std::make_pair(q.eps_plus, q.eps_minus);
    });

    m.def(
        "effective_hamiltonian",
        [](const std::string& s, int n_quad) {
            const DriveSpec d = parse_drive(s);
            Unitary2 h;
            {
                py::gil_scoped_release release;
                h = effective_hamiltonian(d, d.period(), n_quad).h;
            }
            return to_array(h);
        },
        py::arg("spec"), py::arg("n_quad") = 256);

    m.def(
        "rwa_probability",
        [](const std::string& s, double t, bool ps, bool pr) {
            const DriveSpec d = parse_drive(s);
            return rwa_probability(build_table(d), d.eps0, d.omega, t, rwa_opts(ps, pr));
        },
        py::arg("spec"), py::arg("t"), py::arg("paper_sign") = false, py::arg("paper_rabi_scale") = false);
    m.def(
        "rwa_average",
        [](const std::string& s, bool ps, bool pr) {
            const DriveSpec d = parse_drive(s);
            return rwa_average(build_table(d), d.eps0, d.omega, rwa_opts(ps, pr));
        },
        py::arg("spec"), py::arg("paper_sign") = false, py::arg("paper_rabi_scale") = false);

    m.def("rabi_map", [](const std::string& sweep, int l) {
        const SweepSpec sw = sweep_from_json(nlohmann::json::parse(sweep));
        MapResult r;
        {
            py::gil_scoped_release release;
            r = rabi_map(sw, l);
        }
        return map_to_dict(r);
    });
    m.def(
        "avg_map",
        [](const std::string& sweep, bool ps, bool pr) {
            const SweepSpec sw = sweep_from_json(nlohmann::json::parse(sweep));
            MapResult r;
            {
                py::gil_scoped_release release;
                r = avg_map(sw, rwa_opts(ps, pr));
            }
            return map_to_dict(r);
        },
        py::arg("sweep"), py::arg("paper_sign") = false, py::arg("paper_rabi_scale") = false);
}
