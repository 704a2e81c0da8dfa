#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace rigaspec {

enum class BoundaryCondition { Dirichlet, Neumann };

/// Non-decreasing knot sequence for a degree-p B-spline basis on [0, 1].
///
/// Interior knot values may repeat up to p times; a knot of multiplicity m
/// leaves the basis C^{p-m} there. Construction validates the sequence, so a
/// KnotVector that exists is always usable.
class KnotVector {
 public:
  KnotVector(int degree, std::vector<double> knots);

  int degree() const noexcept { return degree_; }
  std::span<const double> knots() const noexcept { return knots_; }
  double operator[](std::size_t i) const { return knots_[i]; }
  std::size_t size() const noexcept { return knots_.size(); }

  /// Number of basis functions, n = #knots - p - 1.
  int dimension() const noexcept { return static_cast<int>(knots_.size()) - degree_ - 1; }

  /// First and last knot values repeated p + 1 times.
  bool is_open() const noexcept { return open_; }

  double front() const noexcept { return knots_.front(); }
  double back() const noexcept { return knots_.back(); }

  /// Distinct knot values in increasing order.
  std::vector<double> unique_knots() const;

  /// Number of times `value` occurs (exact comparison).
  int multiplicity(double value) const noexcept;

  /// Index s of the non-empty span [knots[s], knots[s+1]) containing x. The
  /// right end point maps to the last non-empty span.
  int find_span(double x) const;

  /// Indices s of all non-empty spans, i.e. the elements.
  std::vector<int> element_spans() const;

  bool operator==(const KnotVector& other) const = default;

 private:
  int degree_;
  std::vector<double> knots_;
  bool open_ = false;
};

/// Uniform mesh split into C^{p-1} blocks joined by reduced-continuity separators.
struct BlockLayout {
  int elements = 1;
  int degree = 1;
  int block_size = 1;
  int separator_continuity = 0;
  BoundaryCondition boundary = BoundaryCondition::Dirichlet;

  void validate() const;

  int block_count() const noexcept { return (elements + block_size - 1) / block_size; }
  int separator_count() const noexcept { return block_count() - 1; }

  /// Element indices e (1..elements-1) whose left knot e/elements is a separator.
  std::vector<int> separator_elements() const;

  /// Block owning element e; the last block absorbs any remainder.
  int block_of_element(int e) const noexcept;

  /// Basis dimension before boundary conditions: N_e + p + (p-1-c) N_sep.
  int dimension() const noexcept;

  /// Degrees of freedom after applying the boundary condition.
  int free_dimension() const noexcept;

  /// Reference DOF count of the maximum-continuity discretization on the same
  /// mesh: N_e + p - 2 (Dirichlet) or N_e + p (Neumann).
  int reference_dofs() const noexcept;
};

/// Plain IGA layout: one block, no separators.
BlockLayout iga_layout(int elements, int degree, BoundaryCondition bc = BoundaryCondition::Dirichlet);
/// Classical C^0 finite elements: every element is its own block.
BlockLayout fea_layout(int elements, int degree, BoundaryCondition bc = BoundaryCondition::Dirichlet);
/// Refined IGA with C^0 separators every `block_size` elements.
BlockLayout riga_layout(int elements, int degree, int block_size,
                        BoundaryCondition bc = BoundaryCondition::Dirichlet);

KnotVector make_open_uniform_knots(int elements, int degree);
KnotVector make_block_knots(const BlockLayout& layout);

/// Cox-de Boor evaluation of N_{i,p}(x), with 0/0 := 0 and left limits at the
/// right end of the parametric domain.
double eval_basis(const KnotVector& kv, int i, double x);

/// dN_{i,p}/dx; right-sided at interior knots, left-sided at the final knot.
double eval_basis_deriv(const KnotVector& kv, int i, double x);

/// Values and first derivatives of the p + 1 functions that are non-zero on
/// span `span` (indices span-p .. span), evaluated at x.
struct LocalBasis {
  int first = 0;
  std::vector<double> values;
  std::vector<double> derivs;
};
LocalBasis eval_local_basis(const KnotVector& kv, int span, double x);

/// Knot averages (x_{i+1} + ... + x_{i+p}) / p, one per basis function.
std::vector<double> greville_abscissae(const KnotVector& kv);

/// p - m for the knot `value` of multiplicity m (-1 at open ends).
int continuity_at(const KnotVector& kv, double value);

}  // namespace rigaspec
