#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "qcap/cli.hpp"
#include "qcap/errors.hpp"
#include "qcap/serialization.hpp"

namespace py = pybind11;
using namespace qcap;

namespace {

py::object to_py(const Json& j) {
  return py::module_::import("json").attr("loads")(j.dump());
}

DensityOperator state(const ComplexMatrix& m) { return DensityOperator(m); }

}  // namespace

PYBIND11_MODULE(_qcap, m) {
  m.doc() = "Code-fidelity bounds, Haar code ensembles and typical-subspace reductions";

  auto base = py::register_exception<Error>(m, "Error");
  py::register_exception<InputError>(m, "InputError", base.ptr());
  py::register_exception<DomainError>(m, "DomainError", base.ptr());
  py::register_exception<ResourceLimitError>(m, "ResourceLimitError", base.ptr());

  py::class_<KrausChannel>(m, "KrausChannel")
      .def(py::init<std::vector<ComplexMatrix>, std::string>(), py::arg("kraus"),
           py::arg("name") = "")
      .def_property_readonly("kraus", &KrausChannel::kraus)
      .def_property_readonly("input_dim", &KrausChannel::input_dim)
      .def_property_readonly("output_dim", &KrausChannel::output_dim)
      .def_property_readonly("name", &KrausChannel::name)
      .def("__len__", &KrausChannel::size)
      .def("is_trace_preserving", &KrausChannel::is_trace_preserving,
           py::arg("tol") = kTraceTol)
      .def("to_json", [](const KrausChannel& ch) { return channel_to_json(ch).dump(); })
      .def_static("from_json",
                  [](const std::string& s) { return channel_from_json(Json::parse(s)); });

  m.def("identity_channel", &identity_channel, py::arg("dim"));
  m.def("phase_flip", &phase_flip, py::arg("p"));
  m.def("depolarizing", &depolarizing, py::arg("p"));
  m.def("amplitude_damping", &amplitude_damping, py::arg("gamma"));
  m.def("make_channel", &make_channel, py::arg("kind"), py::arg("params"),
        py::arg("seed") = 0);
  m.def("resolve_channel", &resolve_channel, py::arg("source"), py::arg("seed") = 0);

  m.def("apply", [](const KrausChannel& ch, const ComplexMatrix& rho) { return apply(ch, rho); });
  m.def("minimal_length", &minimal_length);
  m.def("minimize_kraus", &minimize_kraus);
  m.def("classify", [](const KrausChannel& ch) { return to_py(to_json(classify(ch))); });
  m.def("entropy_exchange", [](const ComplexMatrix& rho, const KrausChannel& ch) {
    return entropy_exchange(state(rho), ch);
  });
  m.def("coherent_information", [](const ComplexMatrix& rho, const KrausChannel& ch) {
    return coherent_information(state(rho), ch);
  });
  m.def("entanglement_fidelity", [](const ComplexMatrix& rho, const KrausChannel& ch) {
    return entanglement_fidelity(state(rho), ch);
  });

  m.def("d_operator", [](const ComplexMatrix& basis, const KrausChannel& ch) {
    return d_operator(CodeSubspace(basis), ch);
  });
  m.def("fidelity_bounds", [](const ComplexMatrix& basis, const KrausChannel& ch) {
    return to_py(to_json(fidelity_bounds(CodeSubspace(basis), ch)));
  });

  m.def("exact_average_d2", &exact_average_d2, py::arg("channel"), py::arg("code_dim"));
  m.def("upper_bound_d2", &upper_bound_d2);
  m.def("averaged_fidelity_bound", &averaged_fidelity_bound, py::arg("channel"),
        py::arg("code_dim"));
  m.def(
      "run_ensemble",
      [](const KrausChannel& ch, Index k, std::uint64_t samples, std::uint64_t seed,
         int threads) {
        return to_py(to_json(run_ensemble(ch, EnsembleSpec{ch.input_dim(), k, samples, seed},
                                          threads)));
      },
      py::arg("channel"), py::arg("code_dim"), py::arg("samples"), py::arg("seed"),
      py::arg("threads") = 1);
  m.def(
      "haar_moment_suite",
      [](Index dim, Index k, std::uint64_t samples, std::uint64_t seed, int threads) {
        return to_py(to_json(haar_moment_suite(dim, k, samples, seed, threads)));
      },
      py::arg("dim"), py::arg("code_dim"), py::arg("samples"), py::arg("seed"),
      py::arg("threads") = 1);

  m.def(
      "typical_sequences",
      [](const std::vector<double>& weights, int n, double eps) {
        return to_py(
            to_json(typical_sequences(TypicalSetSpec{ProbabilityDistribution(weights), n, eps})));
      },
      py::arg("weights"), py::arg("n"), py::arg("epsilon"));
  m.def("kraus_distribution",
        [](const KrausChannel& ch) { return kraus_distribution(ch).weights(); });
  m.def(
      "reduced_channel_report",
      [](const KrausChannel& ch, int n, double eps) {
        return to_py(to_json(reduced_channel_report(ch, n, eps)));
      },
      py::arg("channel"), py::arg("n"), py::arg("epsilon"));
  m.def(
      "verify_reduced_relations",
      [](const KrausChannel& ch, int n_min, int n_max, double eps) {
        return to_py(to_json(verify_reduced_relations(ch, n_min, n_max, eps)));
      },
      py::arg("channel"), py::arg("n_min"), py::arg("n_max"), py::arg("epsilon"));
  m.def(
      "achievable_rate_demo",
      [](const KrausChannel& ch, double rate, double eps, int n_min, int n_max) {
        return to_py(to_json(achievable_rate_demo(ch, rate, eps, n_min, n_max)));
      },
      py::arg("channel"), py::arg("rate"), py::arg("epsilon"), py::arg("n_min"),
      py::arg("n_max"));

  m.def("run_cli", [](const std::vector<std::string>& args) {
    std::ostringstream out;
    std::ostringstream err;
    const int code = cli::run(args, out, err);
    return py::make_tuple(code, out.str(), err.str());
  });
}
