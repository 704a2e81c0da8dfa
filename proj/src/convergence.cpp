#include "rigaspec/convergence.hpp"

#include <cmath>
#include <string>

#include "rigaspec/assembly.hpp"
#include "rigaspec/budget.hpp"
#include "rigaspec/eigensolve.hpp"
#include "rigaspec/error.hpp"

namespace rigaspec {

SlopeFit fit_log_slope(const std::vector<double>& h, const std::vector<double>& err, double floor) {
  if (h.size() != err.size()) throw Error(ErrorCode::InvalidArgument, "mesh sizes and errors differ in length");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    if (!(h[i] > 0.0)) throw Error(ErrorCode::InvalidArgument, "mesh size must be positive");
    if (!(std::abs(err[i]) > floor)) continue;
    const double x = std::log(h[i]);
    const double y = std::log(std::abs(err[i]));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  if (n < 2) throw Error(ErrorCode::InvalidArgument, "fewer than two errors above the floor");
  const double den = n * sxx - sx * sx;
  if (den == 0.0) throw Error(ErrorCode::InvalidArgument, "mesh sizes must differ");
  SlopeFit fit;
  fit.slope = (n * sxy - sx * sy) / den;
  fit.intercept = (sy - fit.slope * sx) / n;
  fit.points_used = n;
  return fit;
}

std::vector<ConvergencePoint> convergence_study(const std::function<BlockLayout(int)>& layout_for,
                                                const QuadratureSpec& q, const std::vector<int>& meshes,
                                                int mode) {
  std::vector<ConvergencePoint> out;
  for (int ne : meshes) {
    const BlockLayout layout = layout_for(ne);
    const DiscreteOperator op = assemble_1d(layout, q);
    const Spectrum s = solve_gevp(op, SolveMode::WithVectors);
    if (mode > s.size()) {
      throw Error(ErrorCode::ModeRange, "mode " + std::to_string(mode) + " not available on " + std::to_string(ne) +
                                            " elements");
    }
    const KnotVector& kv = op.knots;
    out.push_back({ne, (kv.back() - kv.front()) / ne, leading_eigenvalue_error(op, s, mode)});
  }
  return out;
}

double optimal_blending_tau(int degree, int elements) {
  if (degree < 1) throw Error(ErrorCode::InvalidDegree, "degree must be >= 1");
  auto first_mode_error = [&](int ne, const QuadratureSpec& q) {
    const DiscreteOperator op = assemble_1d(iga_layout(ne, degree), q);
    return refined_eigenvalue_errors(op, Precision::Extended).front();
  };
  auto single_mesh_tau = [&](int ne) {
    const double eg = first_mode_error(ne, QuadratureSpec::gauss());
    const double el = first_mode_error(ne, QuadratureSpec::lobatto());
    if (eg == el) throw Error(ErrorCode::NoConvergence, "Gauss and Lobatto errors coincide");
    return eg / (eg - el);
  };
  if (elements <= 0) {
    elements = 4;
    while (elements < 32 && std::abs(first_mode_error(4 * elements, QuadratureSpec::gauss())) > 1e-11) elements *= 2;
  }
  const double coarse = single_mesh_tau(elements);
  const double fine = single_mesh_tau(2 * elements);
  return (4.0 * fine - coarse) / 3.0;
}

}  // namespace rigaspec
