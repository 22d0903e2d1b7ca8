#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "infoorder/io.hpp"

namespace py = pybind11;
using namespace infoorder;

namespace {

QuantumDichotomy dichotomy(const ComplexMatrix& r0, const ComplexMatrix& r1) {
  return {DensityMatrix(r0), DensityMatrix(r1)};
}

Subsystem subsystem(int index) {
  if (index != 0 && index != 1) throw py::value_error("subsystem index must be 0 or 1");
  return index == 0 ? Subsystem::First : Subsystem::Second;
}

py::dict feasibility_dict(const FeasibilityReport& r) {
  py::dict d;
  d["verdict"] = to_string(r.verdict);
  d["residual"] = r.residual;
  d["iterations"] = r.iterations;
  d["exactness"] = to_string(r.exactness);
  d["note"] = r.note;
  d["witness"] = r.witness ? py::cast(r.witness->matrix()) : py::none();
  d["obstruction"] = r.obstruction ? py::cast(ComplexVector(r.obstruction->psi)) : py::none();
  return d;
}

py::dict verdict_dict(const CriterionVerdict& v) {
  py::dict d;
  d["outcome"] = to_string(v.outcome);
  d["witness_t"] = v.witness_t ? py::cast(*v.witness_t) : py::none();
  d["witness_gap"] = v.witness_gap;
  std::vector<std::pair<double, double>> iv;
  for (const auto& i : v.uncertified) iv.emplace_back(i.lo, i.hi);
  d["uncertified"] = iv;
  return d;
}

std::vector<StatePair> state_pairs(const std::vector<std::pair<ComplexMatrix, ComplexMatrix>>& in) {
  std::vector<StatePair> out;
  for (const auto& [rho, sigma] : in) out.push_back({DensityMatrix(rho), DensityMatrix(sigma)});
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Information orderings between classical and quantum dichotomies";

  py::register_exception<InvalidInput>(m, "InvalidInput", PyExc_ValueError);
  py::register_exception<DimensionError>(m, "DimensionError", PyExc_ValueError);
  py::register_exception<PreconditionError>(m, "PreconditionError", PyExc_ValueError);
  py::register_exception<HypothesisError>(m, "HypothesisError", PyExc_ValueError);

  // linear algebra
  m.def("eig_hermitian", [](const ComplexMatrix& a) {
    const Spectrum s = eig_hermitian(HermitianMatrix(a));
    return py::make_tuple(s.eigenvalues, s.eigenvectors);
  });
  m.def("trace_norm", [](const ComplexMatrix& a) { return trace_norm(HermitianMatrix(a)); });
  m.def("is_psd", [](const ComplexMatrix& a, double tol) { return is_psd(HermitianMatrix(a), tol); },
        py::arg("a"), py::arg("tol") = 1e-10);
  m.def("kron", &kron);
  m.def("partial_trace", [](const ComplexMatrix& a, Index d1, Index d2, int keep) {
    return partial_trace(a, {d1, d2}, subsystem(keep));
  }, py::arg("a"), py::arg("d1"), py::arg("d2"), py::arg("keep"));
  m.def("partial_transpose", [](const ComplexMatrix& a, Index d1, Index d2, int which) {
    return partial_transpose(a, {d1, d2}, subsystem(which));
  }, py::arg("a"), py::arg("d1"), py::arg("d2"), py::arg("which"));

  // classical experiments
  m.def("l1_t_distance", [](const RealVector& p0, const RealVector& p1, double t) {
    return l1_t_distance(Dichotomy(p0, p1), t);
  });
  m.def("dichotomy_ordering", [](const RealVector& a0, const RealVector& a1, const RealVector& b0,
                                 const RealVector& b1) {
    return dichotomy_ordering(Dichotomy(a0, a1), Dichotomy(b0, b1));
  });
  m.def("randomization_feasible", [](const RealVector& a0, const RealVector& a1,
                                     const RealVector& b0, const RealVector& b1) {
    const RandomizationReport r = randomization_feasible(Dichotomy(a0, a1), Dichotomy(b0, b1));
    py::dict d;
    d["verdict"] = to_string(r.verdict);
    d["residual"] = r.residual;
    d["witness"] = r.witness ? py::cast(r.witness->entries()) : py::none();
    return d;
  });

  // quantum models
  m.def("quantum_l1_t", [](const ComplexMatrix& r0, const ComplexMatrix& r1, double t) {
    return quantum_l1_t(dichotomy(r0, r1), t);
  });
  m.def("helstrom_measurement", [](const ComplexMatrix& r0, const ComplexMatrix& r1, double t) {
    std::vector<ComplexMatrix> out;
    for (const auto& e : helstrom_measurement(dichotomy(r0, r1), t).elements()) out.push_back(e.matrix());
    return out;
  });
  m.def("induced_model", [](const ComplexMatrix& r0, const ComplexMatrix& r1,
                            const std::vector<ComplexMatrix>& effects) {
    std::vector<HermitianMatrix> elems;
    for (const auto& e : effects) elems.emplace_back(e);
    const Dichotomy d = induced_model(dichotomy(r0, r1), POVM(std::move(elems)));
    return py::make_tuple(d.p0(), d.p1());
  });
  m.def("commutes", [](const ComplexMatrix& r0, const ComplexMatrix& r1, double tol) {
    return commutes(dichotomy(r0, r1), tol);
  }, py::arg("rho0"), py::arg("rho1"), py::arg("tol") = 1e-9);
  m.def("t_criterion", [](const ComplexMatrix& a0, const ComplexMatrix& a1, const ComplexMatrix& b0,
                          const ComplexMatrix& b1, int t_resolution, int max_depth) {
    return verdict_dict(t_criterion(dichotomy(a0, a1), dichotomy(b0, b1), {t_resolution, max_depth}));
  }, py::arg("rho0"), py::arg("rho1"), py::arg("sigma0"), py::arg("sigma1"),
     py::arg("t_resolution") = 1024, py::arg("max_depth") = 20);
  m.def("classical_decision_ordering", [](const ComplexMatrix& a0, const ComplexMatrix& a1,
                                          const ComplexMatrix& b0, const ComplexMatrix& b1) {
    return verdict_dict(classical_decision_ordering(dichotomy(a0, a1), dichotomy(b0, b1)));
  });

  // map feasibility
  m.def("cptp_feasible", [](const std::vector<std::pair<ComplexMatrix, ComplexMatrix>>& pairs) {
    return feasibility_dict(cptp_feasible(MapFamilyProblem(state_pairs(pairs), MapClass::CPTP)));
  }, py::arg("pairs"));
  m.def("ptp_decomposable_feasible",
        [](const std::vector<std::pair<ComplexMatrix, ComplexMatrix>>& pairs) {
    return feasibility_dict(
        ptp_decomposable_feasible(MapFamilyProblem(state_pairs(pairs), MapClass::DecomposablePTP)));
  }, py::arg("pairs"));
  m.def("support_obstruction", [](const ComplexMatrix& a0, const ComplexMatrix& a1,
                                  const ComplexMatrix& b0, const ComplexMatrix& b1) -> py::object {
    const auto ob = support_obstruction(dichotomy(a0, a1), dichotomy(b0, b1));
    if (!ob) return py::none();
    return py::cast(ComplexVector(ob->psi));
  });

  // counterexample
  m.def("build_states", [](double alpha, double beta) {
    const CounterexampleStates s = build_states({alpha, beta});
    py::dict d;
    d["rho0"] = s.rho.rho0().matrix();
    d["rho1"] = s.rho.rho1().matrix();
    d["sigma0"] = s.sigma.rho0().matrix();
    d["sigma1"] = s.sigma.rho1().matrix();
    return d;
  });
  m.def("rho_norm_closed", &rho_norm_closed, py::arg("alpha"), py::arg("t"));
  m.def("sigma_norm_closed", &sigma_norm_closed, py::arg("beta"), py::arg("t"));
  m.def("f_gap", [](double alpha, double beta, double t) { return f_gap({alpha, beta}, t); },
        py::arg("alpha"), py::arg("beta"), py::arg("t"));
  m.def("reproduce_json", [](double alpha, double beta, bool allow_out_of_hypothesis) {
    ReproductionConfig config;
    config.allow_out_of_hypothesis = allow_out_of_hypothesis;
    ReproductionReport report;
    {
      py::gil_scoped_release release;
      report = reproduce({alpha, beta}, config);
    }
    return to_json(report).dump();
  }, py::arg("alpha"), py::arg("beta"), py::arg("allow_out_of_hypothesis") = false);
}
