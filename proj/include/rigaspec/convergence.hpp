#pragma once

#include <functional>
#include <vector>

#include "rigaspec/quadrature.hpp"
#include "rigaspec/splines.hpp"

namespace rigaspec {

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  int points_used = 0;
};

/// Least-squares slope of log|err| against log h, ignoring points with
/// |err| <= floor. Needs two usable points.
SlopeFit fit_log_slope(const std::vector<double>& h, const std::vector<double>& err, double floor = 1e-13);

struct ConvergencePoint {
  int elements = 0;
  double h = 0.0;
  double ev_rel = 0.0;  // refined relative error of the requested mode
};

/// Relative error of mode `mode` for each mesh, from the layout produced by
/// `layout_for(elements)` and rule `q`.
std::vector<ConvergencePoint> convergence_study(const std::function<BlockLayout(int)>& layout_for,
                                                const QuadratureSpec& q, const std::vector<int>& meshes,
                                                int mode = 1);

/// Blending parameter cancelling the leading eigenvalue error of IGA of
/// degree p. The error is affine in tau to leading order, so on one mesh
/// tau_N = e_G / (e_G - e_L) with e_G, e_L the first-mode errors under Gauss and
/// Lobatto. tau_N carries an O(h^2) bias; the result is the Richardson value
/// (4 tau_2N - tau_N) / 3, computed in extended precision. elements = 0 picks
/// the finest N <= 32 whose Gauss error on 4N elements stays above 1e-11.
double optimal_blending_tau(int degree, int elements = 0);

}  // namespace rigaspec
