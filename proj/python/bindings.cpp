#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qleak/cloning.hpp"
#include "qleak/errors.hpp"
#include "qleak/io.hpp"
#include "qleak/leakage.hpp"
#include "qleak/measurements.hpp"
#include "qleak/protocol.hpp"
#include "qleak/states.hpp"

namespace py = pybind11;
using namespace qleak;

namespace {

using CArray = py::array_t<std::complex<double>, py::array::c_style | py::array::forcecast>;

ComplexMatrix to_matrix(const CArray& a) {
  if (a.ndim() != 2 || a.shape(0) != a.shape(1) || a.shape(0) == 0) {
    throw InvalidInput("expected a non-empty square 2-D array");
  }
  const auto d = static_cast<std::size_t>(a.shape(0));
  std::vector<Complex> entries(a.data(), a.data() + d * d);
  return ComplexMatrix(d, std::move(entries));
}

CArray to_array(const ComplexMatrix& m) {
  const auto d = static_cast<py::ssize_t>(m.dim());
  CArray out({d, d});
  std::copy(m.entries().begin(), m.entries().end(), out.mutable_data());
  return out;
}

py::object from_json(const json& j) {
  return py::module_::import("json").attr("loads")(j.dump());
}

py::list povm_arrays(const Povm& povm) {
  py::list out;
  for (const auto& f : povm.elements()) out.append(to_array(f.matrix()));
  return out;
}

py::dict estimate_dict(const LeakageEstimate& est) {
  const json j = to_json(est);
  py::dict out;
  out["bits"] = est.bits;
  out["kind"] = to_string(est.kind);
  out["meta"] = from_json(j["meta"]);
  out["povm"] = est.achieving_povm ? py::object(povm_arrays(*est.achieving_povm)) : py::none();
  return out;
}

OptimizerConfig make_config(int starts, int evals, std::uint64_t seed) {
  OptimizerConfig c;
  c.starts = starts;
  c.evals_per_start = evals;
  c.seed = seed;
  return c;
}

CqEnsemble make_ensemble(const std::vector<CArray>& states, std::optional<std::vector<double>> probs,
                         std::optional<std::vector<std::string>> labels) {
  const std::size_t n = states.size();
  if (n == 0) throw InvalidInput("ensemble needs at least one state");
  if (!probs) probs = std::vector<double>(n, 1.0 / static_cast<double>(n));
  if (!labels) {
    labels.emplace();
    for (std::size_t i = 0; i < n; ++i) labels->push_back(std::to_string(i));
  }
  std::vector<DensityOperator> rhos;
  for (const auto& s : states) rhos.emplace_back(to_matrix(s));
  return CqEnsemble(std::move(*labels), std::move(*probs), std::move(rhos));
}

PovmImplementation make_implementation(const std::vector<CArray>& ops,
                                       std::optional<std::vector<std::string>> labels) {
  std::vector<ComplexMatrix> mats;
  for (const auto& b : ops) mats.push_back(to_matrix(b));
  if (!labels) {
    labels.emplace();
    for (std::size_t i = 0; i < mats.size(); ++i) labels->push_back(std::to_string(i));
  }
  return PovmImplementation(std::move(*labels), std::move(mats));
}

}  // namespace

PYBIND11_MODULE(_qleak, m) {
  m.doc() = "Maximal and gentle quantum leakage (C++ core)";

  py::register_exception<InvalidInput>(m, "InvalidInput", PyExc_ValueError);
  py::register_exception<PreconditionFailed>(m, "PreconditionFailed", PyExc_RuntimeError);
  py::register_exception<NotConverged>(m, "NotConverged", PyExc_RuntimeError);

  py::class_<CqEnsemble>(m, "Ensemble")
      .def(py::init(&make_ensemble), py::arg("states"), py::arg("probs") = py::none(),
           py::arg("labels") = py::none(),
           "Classical-quantum ensemble; probabilities default to uniform.")
      .def_static("bb84", &bb84_ensemble)
      .def_static("load", [](const std::string& path) { return load_ensemble(path); })
      .def_property_readonly("dim", &CqEnsemble::dim)
      .def_property_readonly("labels", &CqEnsemble::labels)
      .def_property_readonly("probs", &CqEnsemble::probs)
      .def_property_readonly("states",
                             [](const CqEnsemble& e) {
                               py::list out;
                               for (const auto& rho : e.states()) out.append(to_array(rho.matrix()));
                               return out;
                             })
      .def("__len__", &CqEnsemble::size)
      .def("to_json", [](const CqEnsemble& e) { return to_json(e).dump(); });

  m.def(
      "maximal_leakage",
      [](const CqEnsemble& e, int starts, int evals, std::uint64_t seed) {
        return estimate_dict(maximal_quantum_leakage(e, make_config(starts, evals, seed)));
      },
      py::arg("ensemble"), py::arg("starts") = 32, py::arg("evals") = 2000, py::arg("seed") = 42);

  m.def(
      "grid_oracle",
      [](const CqEnsemble& e, int resolution) {
        return estimate_dict(mql_grid_oracle_d2(e, resolution));
      },
      py::arg("ensemble"), py::arg("resolution") = 721);

  m.def(
      "povm_leakage",
      [](const CqEnsemble& e, const std::vector<CArray>& elements) {
        std::vector<HermitianMatrix> fs;
        std::vector<std::string> labels;
        for (const auto& f : elements) {
          fs.emplace_back(to_matrix(f));
          labels.push_back(std::to_string(labels.size()));
        }
        return povm_leakage(e, Povm(std::move(labels), std::move(fs)));
      },
      py::arg("ensemble"), py::arg("elements"));

  m.def(
      "lower_bound",
      [](const CqEnsemble& e, double alpha, std::optional<double> q_bits) {
        const double q = q_bits ? *q_bits : maximal_quantum_leakage(e).bits;
        return from_json(to_json(lower_bound_solve(e, alpha, q)));
      },
      py::arg("ensemble"), py::arg("alpha"), py::arg("q_bits") = py::none());

  m.def(
      "bound_sweep",
      [](const CqEnsemble& e, const std::vector<double>& alphas, std::optional<double> q_bits) {
        const double q = q_bits ? *q_bits : maximal_quantum_leakage(e).bits;
        py::list out;
        for (const auto& row : bound_sweep(e, alphas, q)) {
          py::dict d;
          d["alpha"] = row.alpha;
          d["p1"] = row.p1;
          d["p2"] = row.p2;
          d["lower_bits"] = row.lower_bits;
          out.append(d);
        }
        return out;
      },
      py::arg("ensemble"), py::arg("alphas"), py::arg("q_bits") = py::none());

  m.def(
      "certify",
      [](const CqEnsemble& e, const std::vector<CArray>& operators, double alpha, double delta,
         const std::string& mode, std::optional<std::vector<std::string>> labels) {
        const auto impl = make_implementation(operators, std::move(labels));
        return from_json(to_json(certify_gentle(e, impl, GentlenessSpec(alpha, delta),
                                                parse_gentleness_mode(mode))));
      },
      py::arg("ensemble"), py::arg("operators"), py::arg("alpha"), py::arg("delta"),
      py::arg("mode") = "per-state", py::arg("labels") = py::none(),
      "Gentleness certificate for the implementation {B_y} (F_y = B_y^dagger B_y).");

  m.def(
      "gentle_povm",
      [](const CArray& op, double epsilon) {
        const auto g = gentle_povm(HermitianMatrix(to_matrix(op)), epsilon);
        py::list out;
        for (const auto& b : g.implementation.operators()) out.append(to_array(b));
        return out;
      },
      py::arg("m"), py::arg("epsilon"),
      "Operators B+, B-, B0 of the three-outcome gentle construction.");

  m.def(
      "epsilon_prime",
      [](const CArray& op, const CqEnsemble& e, double alpha, double delta,
         const std::string& mode, bool analytic_cap) {
        const auto r = epsilon_prime(HermitianMatrix(to_matrix(op)), GentlenessSpec(alpha, delta),
                                     e, parse_gentleness_mode(mode), analytic_cap);
        py::dict out;
        out["epsilon"] = r.epsilon;
        out["bisection"] = r.bisection;
        out["analytic_cap"] = r.analytic_cap;
        out["iterations"] = r.iterations;
        return out;
      },
      py::arg("m"), py::arg("ensemble"), py::arg("alpha"), py::arg("delta"),
      py::arg("mode") = "per-state", py::arg("analytic_cap") = false);

  m.def(
      "positive_part",
      [](const CArray& a) { return to_array(positive_part(HermitianMatrix(to_matrix(a))).matrix()); },
      py::arg("a"));

  m.def(
      "gentle_interval",
      [](const CqEnsemble& e, double alpha, double delta, const std::string& mode, int starts,
         int evals, std::uint64_t seed) {
        const auto r = gentle_leakage_interval(e, GentlenessSpec(alpha, delta),
                                               make_config(starts, evals, seed),
                                               parse_gentleness_mode(mode));
        py::dict out;
        out["lower_bits"] = r.lower_bits;
        out["upper_bits"] = r.upper_bits;
        out["lower_witness"] = to_string(r.lower_witness);
        out["cloning_bits"] = r.cloning_bits;
        out["search_bits"] = r.search_bits;
        return out;
      },
      py::arg("ensemble"), py::arg("alpha"), py::arg("delta"), py::arg("mode") = "per-state",
      py::arg("starts") = 32, py::arg("evals") = 2000, py::arg("seed") = 42);

  m.def(
      "depolarize",
      [](const CqEnsemble& e, double p) { return depolarize(e, DepolarizingParam(p)); },
      py::arg("ensemble"), py::arg("p"));

  m.def(
      "depolarized_leakage",
      [](double bits, double p) { return depolarized_leakage(bits, DepolarizingParam(p)); },
      py::arg("bits"), py::arg("p"));

  m.def(
      "simulate",
      [](const std::string& strategy, long rounds, std::uint64_t seed, double epsilon) {
        return from_json(to_json(run_simulation(EveStrategy::parse(strategy, epsilon), rounds, seed)));
      },
      py::arg("strategy"), py::arg("rounds") = 100000, py::arg("seed") = 42,
      py::arg("epsilon") = 0.05);

  m.def(
      "exact_round_statistics",
      [](const std::string& strategy, double epsilon) {
        return from_json(to_json(exact_round_statistics(EveStrategy::parse(strategy, epsilon))));
      },
      py::arg("strategy"), py::arg("epsilon") = 0.05);

  m.def(
      "trace_distance",
      [](const CArray& a, const CArray& b) {
        return trace_distance(HermitianMatrix(to_matrix(a)), HermitianMatrix(to_matrix(b)));
      },
      py::arg("rho"), py::arg("sigma"));
}
