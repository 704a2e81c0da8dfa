#pragma once

#include <Eigen/Dense>
#include <map>
#include <vector>

#include "rigaspec/assembly.hpp"
#include "rigaspec/eigensolve.hpp"

namespace rigaspec {

/// Eigenpair of -u'' = lambda u on (0, 1): sqrt(2) sin(j pi x) with Dirichlet
/// conditions, sqrt(2) cos(j pi x) (and the constant for j = 0) with Neumann.
struct ExactMode {
  int index = 1;
  BoundaryCondition boundary = BoundaryCondition::Dirichlet;
  double eigenvalue = 0.0;

  double operator()(double x) const;
};

ExactMode exact_spectrum_1d(int j, BoundaryCondition bc = BoundaryCondition::Dirichlet);

/// (j^2 + k^2) pi^2 on the unit square.
double exact_eigenvalue_2d(int j, int k);

/// L2 products between exact modes and discrete functions sum_i v_i N_i.
///
/// Each element is split into s equal pieces integrated with (p + 2)-point
/// Gauss, s = max(1, ceil(j h) + 1), so that every piece sees at most about
/// half an oscillation of the exact mode. Basis tables are cached per s.
class L2Projector {
 public:
  L2Projector(const KnotVector& kv, BoundaryCondition bc);

  /// Subdivisions used for mode j.
  int default_subdivisions(int j) const noexcept;

  double inner(const ExactMode& u, const Eigen::VectorXd& v, int subdivisions = 0);

 private:
  struct Table {
    std::vector<double> x;        // quadrature nodes, all elements
    std::vector<double> w;        // weights
    std::vector<int> first;       // first basis index per node
    std::vector<double> values;   // (p + 1) values per node
  };
  const Table& table(int subdivisions);

  KnotVector kv_;
  BoundaryCondition bc_;
  double h_min_;
  std::map<int, Table> tables_;
};

double l2_pair_inner(const ExactMode& u, const Eigen::VectorXd& v, const KnotVector& kv,
                     BoundaryCondition bc = BoundaryCondition::Dirichlet, int subdivisions = 0);

/// Per-mode terms of the Pythagorean eigenvalue error identity with modified
/// (quadrature-dependent) inner products:
///   ef_energy_rel_sq = ev_rel + ef_l2_sq + energy_gap + l2_deficit.
/// With exact quadrature the last two vanish and the classical identity remains.
struct ModeErrorBudget {
  int position = 0;           // 1-based position in the ascending discrete spectrum
  int j = 0;                  // exact mode index paired with it
  double j_over_n0 = 0.0;
  double lambda_exact = 0.0;
  double lambda_h = 0.0;
  double ev_rel = 0.0;
  double ef_l2_sq = 0.0;
  double ef_energy_rel_sq = 0.0;
  double energy_gap = 0.0;
  double l2_deficit = 0.0;
  /// ev_rel + ef_l2_sq + energy_gap + l2_deficit - ef_energy_rel_sq.
  double pythagoras_residual = 0.0;
};

/// Budgets for spectrum positions first..last (1-based, inclusive; last = 0
/// means the whole spectrum). Modes are paired by ascending order only.
std::vector<ModeErrorBudget> error_budget(const Spectrum& spectrum, const DiscreteOperator& op, int first = 1,
                                          int last = 0);

/// Relative error of the lowest discrete eigenvalue recomputed as an
/// element-wise Rayleigh quotient of its eigenvector.
double leading_eigenvalue_error(const DiscreteOperator& op, const Spectrum& spectrum, int position = 1);

enum class Precision { Double, Extended };

/// Unit roundoff of the arithmetic behind `precision`.
double unit_roundoff(Precision precision) noexcept;

/// Relative eigenvalue error of every mode in ascending order, with each
/// discrete eigenvalue recomputed as the element-wise Rayleigh quotient of its
/// eigenvector. Extended runs the eigensolve and the quotients in long double;
/// it is roughly ten times slower and resolves errors three orders smaller.
/// The Neumann constant mode (zero exact eigenvalue) is reported as NaN.
std::vector<double> refined_eigenvalue_errors(const DiscreteOperator& op, Precision precision = Precision::Double);

/// 2D errors: index-paired (j, k) against (j^2 + k^2) pi^2 using the 1D
/// eigenvalues (Kronecker identity), listed in ascending discrete order. The
/// rank-paired columns compare the i-th smallest discrete and exact values.
struct Mode2DError {
  int rank = 0;
  int j = 0;
  int k = 0;
  double lambda_h = 0.0;
  double lambda_exact = 0.0;
  double ev_rel = 0.0;
  double lambda_exact_sorted = 0.0;
  double ev_rel_sorted = 0.0;
};
std::vector<Mode2DError> errors_2d(const Eigen::VectorXd& eigenvalues_1d);

}  // namespace rigaspec
