#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "rigaspec/branches.hpp"
#include "rigaspec/budget.hpp"
#include "rigaspec/cli.hpp"
#include "rigaspec/convergence.hpp"
#include "rigaspec/error.hpp"
#include "rigaspec/outliers.hpp"
#include "rigaspec/stopping_bands.hpp"

namespace py = pybind11;
using namespace rigaspec;

namespace {

py::dict budget_columns(const std::vector<ModeErrorBudget>& budget) {
  const auto n = static_cast<Eigen::Index>(budget.size());
  Eigen::VectorXi j(n);
  Eigen::VectorXd x(n), le(n), lh(n), ev(n), l2(n), en(n), gap(n), def(n), res(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const ModeErrorBudget& b = budget[k];
    j[k] = b.j;
    x[k] = b.j_over_n0;
    le[k] = b.lambda_exact;
    lh[k] = b.lambda_h;
    ev[k] = b.ev_rel;
    l2[k] = b.ef_l2_sq;
    en[k] = b.ef_energy_rel_sq;
    gap[k] = b.energy_gap;
    def[k] = b.l2_deficit;
    res[k] = b.pythagoras_residual;
  }
  py::dict d;
  d["j"] = j;
  d["j_over_N0"] = x;
  d["lambda_exact"] = le;
  d["lambda_h"] = lh;
  d["ev_rel"] = ev;
  d["ef_l2_sq"] = l2;
  d["ef_energy_rel_sq"] = en;
  d["energy_gap"] = gap;
  d["l2_deficit"] = def;
  d["pythagoras_residual"] = res;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Spectral analysis of isogeometric discretizations with C0 separators";

  PYBIND11_CONSTINIT static py::gil_safe_call_once_and_store<py::object> error_type;
  error_type.call_once_and_store_result(
      [&]() { return py::object(py::exception<Error>(m, "RigaspecError", PyExc_ValueError)); });
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      const py::object& cls = error_type.get_stored();
      py::object inst = cls(e.what());
      inst.attr("code") = to_string(e.code());
      PyErr_SetObject(cls.ptr(), inst.ptr());
    }
  });

  py::enum_<BoundaryCondition>(m, "BoundaryCondition")
      .value("DIRICHLET", BoundaryCondition::Dirichlet)
      .value("NEUMANN", BoundaryCondition::Neumann);

  py::class_<BlockLayout>(m, "BlockLayout")
      .def_readonly("elements", &BlockLayout::elements)
      .def_readonly("degree", &BlockLayout::degree)
      .def_readonly("block_size", &BlockLayout::block_size)
      .def_readonly("boundary", &BlockLayout::boundary)
      .def_property_readonly("separator_count", &BlockLayout::separator_count)
      .def_property_readonly("free_dimension", &BlockLayout::free_dimension)
      .def_property_readonly("reference_dofs", &BlockLayout::reference_dofs);

  const auto dir = BoundaryCondition::Dirichlet;
  m.def("iga_layout", &iga_layout, py::arg("elements"), py::arg("degree"), py::arg("bc") = dir);
  m.def("fea_layout", &fea_layout, py::arg("elements"), py::arg("degree"), py::arg("bc") = dir);
  m.def("riga_layout", &riga_layout, py::arg("elements"), py::arg("degree"), py::arg("block_size"),
        py::arg("bc") = dir);

  py::class_<QuadratureSpec>(m, "Quadrature")
      .def_static("gauss", &QuadratureSpec::gauss, py::arg("points") = 0)
      .def_static("lobatto", &QuadratureSpec::lobatto, py::arg("points") = 0)
      .def_static("blended", &QuadratureSpec::blended, py::arg("tau"), py::arg("points") = 0)
      .def_readonly("tau", &QuadratureSpec::tau)
      .def("__repr__", &QuadratureSpec::describe);

  py::class_<DiscreteOperator>(m, "Operator")
      .def_property_readonly("dimension", &DiscreteOperator::dimension)
      .def_readonly("layout", &DiscreteOperator::layout)
      .def_property_readonly("mass", [](const DiscreteOperator& op) { return op.mass.to_dense(); })
      .def_property_readonly("stiffness", [](const DiscreteOperator& op) { return op.stiffness.to_dense(); })
      .def_property_readonly("mass_exact", [](const DiscreteOperator& op) { return op.mass_exact.to_dense(); })
      .def_property_readonly("stiffness_exact",
                             [](const DiscreteOperator& op) { return op.stiffness_exact.to_dense(); });

  m.def("assemble", py::overload_cast<const BlockLayout&, const QuadratureSpec&>(&assemble_1d), py::arg("layout"),
        py::arg("quadrature") = QuadratureSpec::gauss());

  m.def(
      "solve",
      [](const DiscreteOperator& op, bool vectors) {
        const Spectrum s = solve_gevp(op, vectors ? SolveMode::WithVectors : SolveMode::EigenvaluesOnly);
        return py::make_tuple(s.eigenvalues, vectors ? py::cast(s.eigenvectors) : py::none());
      },
      py::arg("op"), py::arg("vectors") = true, "Ascending eigenvalues and mass-normalized eigenvectors.");

  m.def(
      "error_budget", [](const DiscreteOperator& op) { return budget_columns(error_budget(solve_gevp(op), op)); },
      py::arg("op"), "Per-mode error budget as a dict of columns.");

  m.def(
      "refined_errors",
      [](const DiscreteOperator& op, bool extended) {
        return refined_eigenvalue_errors(op, extended ? Precision::Extended : Precision::Double);
      },
      py::arg("op"), py::arg("extended") = false);

  m.def("exact_eigenvalue", [](int j, BoundaryCondition bc) { return exact_spectrum_1d(j, bc).eigenvalue; },
        py::arg("j"), py::arg("bc") = dir);

  m.def(
      "count_branches",
      [](const std::vector<double>& ev_rel, int n0) {
        const BranchReport r = count_branches(ev_rel, n0);
        py::dict d;
        d["branches"] = r.branches;
        d["breaks"] = r.breaks;
        return d;
      },
      py::arg("ev_rel"), py::arg("n0"));

  m.def("count_outliers", &count_outliers, py::arg("degree"), py::arg("separators"), py::arg("bc") = dir);

  m.def(
      "outlier_census",
      [](const DiscreteOperator& op) {
        const OutlierReport r = outlier_census(op, solve_gevp(op));
        py::list entries;
        for (const OutlierEntry& e : r.entries) {
          py::dict d;
          d["position"] = e.position;
          d["ev_rel"] = e.ev_rel;
          d["ratio"] = e.ratio;
          d["flagged"] = e.flagged;
          d["dominant_frequency"] = FrequencyContent::frequency(e.dominant_bin);
          d["peak_to_median"] = e.peak_to_median;
          entries.append(d);
        }
        py::dict d;
        d["predicted"] = r.predicted;
        d["observed"] = r.observed;
        d["entries"] = entries;
        return d;
      },
      py::arg("op"));

  m.def(
      "stopping_bands",
      [](const DiscreteOperator& op) {
        const DofPartition part = partition_dofs(op.knots, op.layout);
        const StoppingBandReport r = detect_stopping_bands(solve_gevp(op), local_bubble_spectra(op, part), op.layout);
        py::list bands;
        for (const StoppingBand& b : r.bands) {
          py::dict d;
          d["lambda_b"] = b.lambda_b;
          d["multiplicity"] = b.multiplicity;
          d["nearest_position"] = b.nearest_position;
          d["rel_gap"] = b.rel_gap;
          d["matched"] = b.matched;
          bands.append(d);
        }
        return bands;
      },
      py::arg("op"));

  m.def("optimal_tau", &optimal_blending_tau, py::arg("degree"), py::arg("elements") = 0);

  m.def(
      "run_command",
      [](const std::string& command, const std::map<std::string, std::string>& options) {
        ExperimentConfig config;
        for (const auto& [k, v] : options) set_config_value(config, k, v);
        std::ostringstream log;
        const int code = run_command(command, config, log);
        return py::make_tuple(code, log.str());
      },
      py::arg("command"), py::arg("options") = std::map<std::string, std::string>{},
      "Runs a CLI command in-process; returns (exit code, log text).");
}
