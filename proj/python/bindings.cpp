#include "qnec/algos.hpp"
#include "qnec/analysis.hpp"
#include "qnec/calib.hpp"
#include "qnec/config.hpp"
#include "qnec/pec.hpp"
#include "qnec/qem.hpp"
#include "qnec/recipes.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;

namespace {

qnec::Circuit benchmark(const std::string& name, int depth, int reps, const std::string& style) {
    qnec::BenchmarkSpec spec;
    spec.name = name;
    spec.depth = depth;
    spec.reps = reps;
    spec.style = style == "native" ? qnec::DecomposeStyle::Native : qnec::DecomposeStyle::Direct;
    return qnec::build(spec);
}

qnec::Observable observable(const qnec::Circuit& c, const std::string& name) {
    return qnec::named_observable(name, c.n_register);
}

qnec::InsertMode mode_of(const std::string& m) { return qnec::insert_mode_from_name(m); }

}  // namespace

PYBIND11_MODULE(qnec, m) {
    m.doc() = "Noisy circuit simulation and circuit-group error mitigation";

    py::class_<qnec::Circuit>(m, "Circuit")
        .def_readonly("n_qubits", &qnec::Circuit::n_qubits)
        .def_readonly("n_register", &qnec::Circuit::n_register)
        .def("depth", &qnec::Circuit::depth)
        .def("to_text", [](const qnec::Circuit& c) { return qnec::to_text(c); });

    m.def("circuit_from_text", [](const std::string& t) { return qnec::circuit_from_text(t); });
    m.def("benchmark", &benchmark, py::arg("name"), py::arg("depth") = 9, py::arg("reps") = 1, py::arg("style") = "direct");
    m.def("tau_from_theta", &qnec::tau_from_theta);
    m.def("theta_from_tau", &qnec::theta_from_tau);

    m.def(
        "expectation",
        [](const qnec::Circuit& c, const std::string& obs, double theta) {
            const auto model = theta > 0.0 ? qnec::NoiseModel::amplitude_damping_theta(theta) : qnec::NoiseModel::none();
            return qnec::circuit_expectation(c, observable(c, obs), model);
        },
        py::arg("circuit"), py::arg("observable"), py::arg("theta_tau") = 0.0);

    m.def(
        "qem",
        [](const qnec::Circuit& c, const std::string& obs, double theta, int order, const std::string& mode) {
            qnec::QemOptions o;
            o.order = order;
            o.group.mode = mode_of(mode);
            const auto ob = observable(c, obs);
            const auto mc = qnec::measured_circuit(c, ob);
            const auto e = qnec::run_qem(mc, qnec::make_observable(ob.name, ob.matrix),
                                         qnec::NoiseModel::amplitude_damping_theta(theta), o);
            py::dict d;
            d["ideal"] = *e.ideal;
            d["noisy"] = e.noisy;
            d["qem"] = e.mitigated;
            d["delta1"] = e.delta1;
            d["tau"] = e.tau;
            d["group_circuits"] = e.group_circuits;
            const auto rt = qnec::rt_qem(*e.ideal, e.noisy, e.mitigated);
            d["rt_qem"] = rt ? py::cast(*rt) : py::cast("saturated");
            return d;
        },
        py::arg("circuit"), py::arg("observable"), py::arg("theta_tau"), py::arg("order") = 1, py::arg("mode") = "direct");

    m.def(
        "group_size",
        [](const qnec::Circuit& c, const std::string& mode) {
            qnec::GroupOptions o;
            o.mode = mode_of(mode);
            return qnec::first_order_group(c, qnec::GroupKind::AD, o).distinct_circuits();
        },
        py::arg("circuit"), py::arg("mode") = "direct");

    m.def("pec_exact", [](const qnec::Circuit& c, const std::string& obs, double theta) {
        return qnec::pec_exact_check(c, observable(c, obs), qnec::NoiseModel::amplitude_damping_theta(theta));
    });
    m.def("recovery", [](double theta) {
        const auto r = qnec::recovery(theta);
        py::dict d;
        d["epsilon"] = r.epsilon;
        d["eta_i"] = r.eta_i;
        d["eta_z"] = r.eta_z;
        d["eta_reset"] = r.eta_reset;
        d["gamma_norm"] = r.gamma_norm;
        return d;
    });

    m.def("fit_t1", [](std::vector<double> t, std::vector<double> v) { return qnec::fit_t1({std::move(t), std::move(v)}).t1; });
    m.def("rt_qem", &qnec::rt_qem);
    m.def("probe", [](const std::string& name) { return qnec::run_probe(name); });
    m.def("probe_names", &qnec::probe_names);
}
