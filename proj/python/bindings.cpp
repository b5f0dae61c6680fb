#include "eprx/acceptance.hpp"
#include "eprx/entanglement.hpp"
#include "eprx/errors.hpp"
#include "eprx/measurement.hpp"
#include "eprx/moments.hpp"
#include "eprx/orbitals.hpp"
#include "eprx/sweep.hpp"

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;

namespace {

eprx::ExperimentConfig config_from_dict(const py::dict& d) {
    eprx::KeyValueConfig kv;
    for (const auto& item : d) {
        kv.set(py::str(item.first), py::str(item.second));
    }
    return eprx::experiment_from(kv);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Bindings for the eprx C++ core: overlap tables, block moments, negativity and sweeps.";

    py::register_exception<eprx::ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<eprx::NumericalError>(m, "NumericalError", PyExc_ArithmeticError);

    py::class_<eprx::OverlapTable>(m, "OverlapTable")
        .def_property_readonly("modes", &eprx::OverlapTable::modes)
        .def_property_readonly("left", [](const eprx::OverlapTable& t) { return t.left(); })
        .def_property_readonly("right", [](const eprx::OverlapTable& t) { return t.right(); })
        .def_property_readonly("quadrature_error", &eprx::OverlapTable::quadrature_error);

    m.def(
        "overlap_table",
        [](int modes, double mass, double omega) { return eprx::cached_overlap_table(modes, {mass, omega}); },
        py::arg("modes"), py::arg("mass") = 1.0, py::arg("omega") = 1.0,
        "Half-space overlap table lambda^{L,R}_{kl}, cached on disk when EPRX_CACHE_DIR is set.");

    m.def("orbital", [](int k, double x) { return eprx::eval_orbital(k, x); }, py::arg("k"), py::arg("x"));

    py::class_<eprx::ProbeBlockMoments>(m, "BlockMoments")
        .def_readonly("m_ll", &eprx::ProbeBlockMoments::m_ll)
        .def_readonly("m_rr", &eprx::ProbeBlockMoments::m_rr)
        .def_readonly("m_lr", &eprx::ProbeBlockMoments::m_lr)
        .def_readonly("s", &eprx::ProbeBlockMoments::s)
        .def_property_readonly("negativity", &eprx::ProbeBlockMoments::structural_negativity);

    m.def(
        "block_moments",
        [](const std::string& kind, double value, int modes) {
            eprx::ExperimentConfig c;
            c.kind = eprx::parse_state_kind(kind);
            c.values = {value};
            const auto state = eprx::make_state(c.descriptor(value));
            if (modes <= 0) {
                return eprx::analytic_limit_moments(state);
            }
            const auto table = eprx::cached_overlap_table(modes);
            c.modes = modes;
            return c.use_extrapolation() ? eprx::extrapolated_moments(state, table)
                                         : eprx::moments_from_state(state, table);
        },
        py::arg("kind"), py::arg("value"), py::arg("modes") = 0,
        "Probe-block moments; modes=0 is the K -> infinity limit, K >= 128 (K % 16 == 0) is extrapolated.");

    m.def(
        "negativity",
        [](const Eigen::MatrixXcd& rho, int dim_a, int dim_b) {
            return eprx::negativity(eprx::BipartiteDensity(dim_a, dim_b, rho));
        },
        py::arg("rho"), py::arg("dim_a") = 2, py::arg("dim_b") = 2);

    m.def(
        "negativity_closed_form",
        [](const std::string& kind, double value) {
            const auto k = eprx::parse_state_kind(kind);
            return k == eprx::StateKind::Thermal ? eprx::thermal_negativity_closed_form(value)
                                                 : eprx::negativity_closed_form(k, value);
        },
        py::arg("kind"), py::arg("value"));
    m.def("fidelity_closed_form", &eprx::fidelity_closed_form, py::arg("alpha_sq"));

    m.def(
        "sweep_csv",
        [](const py::dict& config) {
            const auto c = config_from_dict(config);
            c.validate();
            std::ostringstream out;
            eprx::write_sweep_csv(eprx::run_sweep(c), out, c.timing);
            return out.str();
        },
        py::arg("config"), "Runs a sweep from flat dotted keys and returns the CSV text.");

    m.def(
        "sample",
        [](double p, std::uint64_t shots, std::uint64_t seed) {
            return eprx::sample_outcomes(p, shots, seed).successes;
        },
        py::arg("p_succ"), py::arg("shots"), py::arg("seed"));

    m.def(
        "accept",
        [](const std::string& target) {
            py::list out;
            for (const auto& r : eprx::run_acceptance(target)) {
                out.append(py::make_tuple(r.target, r.passed, r.summary));
            }
            return out;
        },
        py::arg("target") = "all");
}
