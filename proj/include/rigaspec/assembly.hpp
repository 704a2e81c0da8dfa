#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <vector>

#include "rigaspec/banded.hpp"
#include "rigaspec/quadrature.hpp"
#include "rigaspec/splines.hpp"

namespace rigaspec {

/// Mass and stiffness on the full basis, before boundary conditions.
struct MassStiffness {
  SymmetricBandedMatrix mass;
  SymmetricBandedMatrix stiffness;
};

MassStiffness assemble_full(const KnotVector& kv, const Rule& reference_rule);

/// 1D Laplace eigenproblem operator after boundary conditions.
///
/// `mass`/`stiffness` use the requested quadrature; `mass_exact`/`stiffness_exact`
/// use Gauss with p + 1 points, which integrates both forms exactly and
/// therefore realises the true L2 and energy inner products on the discrete space.
struct DiscreteOperator {
  KnotVector knots;
  BlockLayout layout;
  QuadratureSpec quadrature;
  Rule rule;                  // reference rule behind mass/stiffness
  std::vector<int> free_dofs; // basis index of each retained unknown
  SymmetricBandedMatrix mass;
  SymmetricBandedMatrix stiffness;
  SymmetricBandedMatrix mass_exact;
  SymmetricBandedMatrix stiffness_exact;

  int dimension() const noexcept { return mass.dimension(); }
};

DiscreteOperator assemble_1d(const KnotVector& kv, const BlockLayout& layout, const QuadratureSpec& q);
/// Convenience overload building the knots from the layout.
DiscreteOperator assemble_1d(const BlockLayout& layout, const QuadratureSpec& q);

/// Element-by-element sums of squares for a coefficient vector v over the
/// operator's own quadrature: (sum w v(x)^2, sum w v'(x)^2). These equal
/// v^T M v and v^T K v but avoid the cancellation in the matrix products, so
/// their ratio resolves eigenvalue errors near machine precision.
struct QuadraticForms {
  double mass = 0.0;
  double stiffness = 0.0;
};
QuadraticForms elementwise_forms(const DiscreteOperator& op, const Eigen::VectorXd& v);
double rayleigh_quotient(const DiscreteOperator& op, const Eigen::VectorXd& v);

/// Expand a free-DOF coefficient vector to the full basis (zeros at eliminated DOFs).
Eigen::VectorXd expand_to_basis(const DiscreteOperator& op, const Eigen::VectorXd& v);

using SparseMatrix = Eigen::SparseMatrix<double>;

/// Square-domain operator on the tensor-product space, unknown (a, b) at a * n1 + b.
struct DiscreteOperator2D {
  int n1 = 0;
  SparseMatrix mass;
  SparseMatrix stiffness;
  SparseMatrix mass_exact;
  SparseMatrix stiffness_exact;

  int dimension() const noexcept { return n1 * n1; }
};

inline constexpr int kDefault2DCap = 40000;

SparseMatrix kronecker(const SparseMatrix& a, const SparseMatrix& b);
SparseMatrix to_sparse(const SymmetricBandedMatrix& a);

/// M2 = M (x) M, K2 = K (x) M + M (x) K.
DiscreteOperator2D assemble_2d_tensor(const DiscreteOperator& op1, int cap = kDefault2DCap);

/// Independent route: loop over 2D elements with the tensor-product rule.
DiscreteOperator2D assemble_2d_direct(const KnotVector& kv, const BlockLayout& layout,
                                      const QuadratureSpec& q, int cap = kDefault2DCap);

}  // namespace rigaspec
