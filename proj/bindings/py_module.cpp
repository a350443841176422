#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "richcore/adversarial.hpp"
#include "richcore/linalg.hpp"
#include "richcore/solvers.hpp"

namespace py = pybind11;
using namespace richcore;

namespace {

std::vector<Index> op_indices(const CoresetOperator& op) {
  std::vector<Index> out;
  out.reserve(op.picks.size());
  for (const Pick& p : op.picks) out.push_back(p.row);
  return out;
}

std::vector<double> op_weights(const CoresetOperator& op) {
  std::vector<double> out;
  out.reserve(op.picks.size());
  for (const Pick& p : op.picks) out.push_back(p.scale);
  return out;
}

CoresetOperator make_operator(const std::vector<Index>& indices,
                              const std::vector<double>& weights, Index source_rows) {
  if (indices.size() != weights.size()) {
    throw precondition_error("indices and weights must have the same length");
  }
  CoresetOperator op;
  op.source_rows = source_rows;
  for (std::size_t i = 0; i < indices.size(); ++i) {
    op.picks.push_back({indices[i], weights[i]});
  }
  op.validate();
  return op;
}

ConstraintDomain domain_from_name(const std::string& name) {
  if (name == "unconstrained") return ConstraintDomain::unconstrained();
  if (name == "nnls") return ConstraintDomain::nonnegative();
  throw precondition_error("unknown domain: " + name);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Deterministic coreset construction for constrained least-squares "
            "regression";

  py::register_exception<precondition_error>(m, "PreconditionError", PyExc_ValueError);
  py::register_exception<solver_error>(m, "SolverError", PyExc_RuntimeError);
  py::register_exception<numerical_error>(m, "NumericalError", PyExc_RuntimeError);

  py::class_<CoresetOperator>(m, "CoresetOperator")
      .def(py::init(&make_operator), py::arg("indices"), py::arg("weights"),
           py::arg("source_rows"))
      .def_property_readonly("indices", &op_indices)
      .def_property_readonly("weights", &op_weights)
      .def_readonly("source_rows", &CoresetOperator::source_rows)
      .def("__len__", [](const CoresetOperator& op) { return op.picks.size(); });

  py::class_<CoresetBundle>(m, "CoresetBundle")
      .def_readonly("op", &CoresetBundle::op)
      .def_property_readonly("mode",
                             [](const CoresetBundle& b) { return to_string(b.mode); })
      .def_readonly("predicted_bound", &CoresetBundle::predicted_bound);

  m.def("apply", [](const CoresetOperator& op, const Matrix& M) { return apply(op, M); },
        py::arg("op"), py::arg("matrix"));

  m.def("single_set_spectral", &single_set_spectral, py::arg("U"), py::arg("r"));
  m.def("dual_set_spectral",
        [](const Matrix& V, const Matrix& Psi, Index r) {
          return dual_set_spectral({V, Psi, r});
        },
        py::arg("V_rows"), py::arg("Psi"), py::arg("r"));
  m.def("dual_set_spectral_frobenius",
        [](const Matrix& V, const Matrix& Psi, Index r) {
          return dual_set_spectral_frobenius({V, Psi, r});
        },
        py::arg("V_rows"), py::arg("Psi"), py::arg("r"));

  m.def("simple_coreset",
        [](const Matrix& A, const Vector& b, Index r) {
          return simple_coreset(RegressionInstance(A, b), r);
        },
        py::arg("A"), py::arg("b"), py::arg("r"));
  m.def("multi_objective_coreset",
        [](const Matrix& A, const Matrix& B, Index r) {
          return multi_objective_coreset(MultiResponseInstance(A, B), r);
        },
        py::arg("A"), py::arg("B"), py::arg("r"));
  m.def("arbitrary_constrained_coreset",
        [](const Matrix& A, const Matrix& B, Index r) {
          return arbitrary_constrained_coreset(MultiResponseInstance(A, B), r);
        },
        py::arg("A"), py::arg("B"), py::arg("r"));
  m.def("multiple_spectral_coreset",
        [](const Matrix& A, const Matrix& B, Index r) {
          return multiple_spectral_coreset(MultiResponseInstance(A, B), r);
        },
        py::arg("A"), py::arg("B"), py::arg("r"));
  m.def("multiple_frobenius_coreset",
        [](const Matrix& A, const Matrix& B, Index r) {
          return multiple_frobenius_coreset(MultiResponseInstance(A, B), r);
        },
        py::arg("A"), py::arg("B"), py::arg("r"));
  m.def("agnostic_coreset", &agnostic_coreset, py::arg("A"), py::arg("r"));

  m.def("lift_block_diagonal",
        [](const Matrix& A, const Matrix& B) {
          return lift_block_diagonal(MultiResponseInstance(A, B));
        },
        py::arg("A"), py::arg("B"));

  m.def("solve_unconstrained",
        [](const Matrix& A, const Matrix& rhs) { return solve_unconstrained(A, rhs); },
        py::arg("A"), py::arg("rhs"));
  m.def("solve_nnls",
        [](const Matrix& A, const Vector& b) { return solve_nnls(A, b); },
        py::arg("A"), py::arg("b"));
  m.def("solve_on_coreset",
        [](const CoresetOperator& op, const Matrix& A, const Vector& b,
           const std::string& domain) {
          return solve_on_coreset(op, RegressionInstance(A, b), domain_from_name(domain));
        },
        py::arg("op"), py::arg("A"), py::arg("b"), py::arg("domain") = "unconstrained");

  m.def("error_ratio",
        [](double optimal_sq, double candidate_sq, double scale_sq) {
          return error_ratio(optimal_sq, candidate_sq, scale_sq);
        },
        py::arg("optimal_sq"), py::arg("candidate_sq"), py::arg("scale_sq"));

  m.def("pseudoinverse", &pseudoinverse, py::arg("M"));
  m.def("numerical_rank", &numerical_rank, py::arg("M"));

  m.def("hard_instance_for_coreset",
        [](Index n, Index d, const std::vector<Index>& indices) {
          const AgnosticHardInstance inst = hard_instance_for_coreset(n, d, indices);
          return py::make_tuple(inst.A, inst.b, inst.guaranteed_ratio);
        },
        py::arg("n"), py::arg("d"), py::arg("coreset_indices"));
  m.def("worst_ratio_over_coresets", &worst_ratio_over_coresets, py::arg("n"),
        py::arg("d"), py::arg("r"));
  m.def("two_point_instance", []() {
    const RegressionInstance inst = two_point_instance();
    return py::make_tuple(inst.A, inst.b);
  });
}
