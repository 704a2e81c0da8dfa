#include "rigaspec/assembly.hpp"

#include <algorithm>
#include <string>

#include "rigaspec/error.hpp"

namespace rigaspec {

namespace {

std::vector<int> free_dof_list(int dimension, BoundaryCondition bc) {
  std::vector<int> keep;
  const int first = bc == BoundaryCondition::Dirichlet ? 1 : 0;
  const int last = bc == BoundaryCondition::Dirichlet ? dimension - 2 : dimension - 1;
  for (int i = first; i <= last; ++i) keep.push_back(i);
  return keep;
}

// Position of each basis function among the free DOFs, -1 when eliminated.
std::vector<int> free_position(int dimension, const std::vector<int>& free_dofs) {
  std::vector<int> pos(dimension, -1);
  for (std::size_t k = 0; k < free_dofs.size(); ++k) pos[free_dofs[k]] = static_cast<int>(k);
  return pos;
}

}  // namespace

MassStiffness assemble_full(const KnotVector& kv, const Rule& reference_rule) {
  const int p = kv.degree();
  const int n = kv.dimension();
  MassStiffness out{SymmetricBandedMatrix(n, p), SymmetricBandedMatrix(n, p)};
  for (int span : kv.element_spans()) {
    const Rule rule = map_rule_to_element(reference_rule, kv[span], kv[span + 1]);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const LocalBasis lb = eval_local_basis(kv, span, rule.nodes[q]);
      const double w = rule.weights[q];
      for (int a = 0; a <= p; ++a) {
        for (int b = a; b <= p; ++b) {
          out.mass.add(lb.first + a, lb.first + b, w * lb.values[a] * lb.values[b]);
          out.stiffness.add(lb.first + a, lb.first + b, w * lb.derivs[a] * lb.derivs[b]);
        }
      }
    }
  }
  return out;
}

DiscreteOperator assemble_1d(const KnotVector& kv, const BlockLayout& layout, const QuadratureSpec& q) {
  layout.validate();
  if (kv.degree() != layout.degree || !(kv == make_block_knots(layout))) {
    throw Error(ErrorCode::InconsistentLayout, "knot vector does not match the block layout");
  }
  const int p = kv.degree();
  const Rule rule = make_rule(q, p);
  const Rule exact_rule = gauss_rule(p + 1);

  const MassStiffness full = assemble_full(kv, rule);
  const MassStiffness exact = assemble_full(kv, exact_rule);
  std::vector<int> keep = free_dof_list(kv.dimension(), layout.boundary);
  if (keep.empty()) throw Error(ErrorCode::InvalidArgument, "no degrees of freedom after boundary conditions");

  DiscreteOperator op{kv,
                      layout,
                      q,
                      rule,
                      keep,
                      full.mass.restrict_to(keep),
                      full.stiffness.restrict_to(keep),
                      exact.mass.restrict_to(keep),
                      exact.stiffness.restrict_to(keep)};
  if (!op.mass.is_positive_definite()) {
    throw Error(ErrorCode::SingularMass, "assembled mass matrix is not positive definite under " + q.describe());
  }
  return op;
}

DiscreteOperator assemble_1d(const BlockLayout& layout, const QuadratureSpec& q) {
  return assemble_1d(make_block_knots(layout), layout, q);
}

Eigen::VectorXd expand_to_basis(const DiscreteOperator& op, const Eigen::VectorXd& v) {
  if (v.size() != op.dimension()) throw Error(ErrorCode::InvalidArgument, "coefficient length mismatch");
  Eigen::VectorXd full = Eigen::VectorXd::Zero(op.knots.dimension());
  for (std::size_t k = 0; k < op.free_dofs.size(); ++k) full[op.free_dofs[k]] = v[static_cast<Eigen::Index>(k)];
  return full;
}

QuadraticForms elementwise_forms(const DiscreteOperator& op, const Eigen::VectorXd& v) {
  const Eigen::VectorXd c = expand_to_basis(op, v);
  const KnotVector& kv = op.knots;
  const int p = kv.degree();
  QuadraticForms f;
  for (int span : kv.element_spans()) {
    const Rule rule = map_rule_to_element(op.rule, kv[span], kv[span + 1]);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const LocalBasis lb = eval_local_basis(kv, span, rule.nodes[q]);
      double val = 0.0, der = 0.0;
      for (int a = 0; a <= p; ++a) {
        val += c[lb.first + a] * lb.values[a];
        der += c[lb.first + a] * lb.derivs[a];
      }
      f.mass += rule.weights[q] * val * val;
      f.stiffness += rule.weights[q] * der * der;
    }
  }
  return f;
}

double rayleigh_quotient(const DiscreteOperator& op, const Eigen::VectorXd& v) {
  const QuadraticForms f = elementwise_forms(op, v);
  return f.stiffness / f.mass;
}

SparseMatrix to_sparse(const SymmetricBandedMatrix& a) {
  std::vector<Eigen::Triplet<double>> t;
  const int n = a.dimension();
  for (int i = 0; i < n; ++i) {
    for (int j = std::max(0, i - a.bandwidth()); j <= std::min(n - 1, i + a.bandwidth()); ++j) {
      const double v = a(i, j);
      if (v != 0.0) t.emplace_back(i, j, v);
    }
  }
  SparseMatrix s(n, n);
  s.setFromTriplets(t.begin(), t.end());
  return s;
}

SparseMatrix kronecker(const SparseMatrix& a, const SparseMatrix& b) {
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(static_cast<std::size_t>(a.nonZeros()) * static_cast<std::size_t>(b.nonZeros()));
  for (int ka = 0; ka < a.outerSize(); ++ka) {
    for (SparseMatrix::InnerIterator ia(a, ka); ia; ++ia) {
      for (int kb = 0; kb < b.outerSize(); ++kb) {
        for (SparseMatrix::InnerIterator ib(b, kb); ib; ++ib) {
          t.emplace_back(ia.row() * b.rows() + ib.row(), ia.col() * b.cols() + ib.col(),
                         ia.value() * ib.value());
        }
      }
    }
  }
  SparseMatrix k(a.rows() * b.rows(), a.cols() * b.cols());
  k.setFromTriplets(t.begin(), t.end());
  return k;
}

namespace {

void check_2d_cap(long long n1, int cap) {
  if (n1 * n1 > cap) {
    throw Error(ErrorCode::DimensionOverflow,
                "2D dimension " + std::to_string(n1 * n1) + " exceeds cap " + std::to_string(cap));
  }
}

}  // namespace

DiscreteOperator2D assemble_2d_tensor(const DiscreteOperator& op1, int cap) {
  check_2d_cap(op1.dimension(), cap);
  const SparseMatrix m = to_sparse(op1.mass);
  const SparseMatrix k = to_sparse(op1.stiffness);
  const SparseMatrix me = to_sparse(op1.mass_exact);
  const SparseMatrix ke = to_sparse(op1.stiffness_exact);
  DiscreteOperator2D out;
  out.n1 = op1.dimension();
  out.mass = kronecker(m, m);
  out.stiffness = SparseMatrix(kronecker(k, m) + kronecker(m, k));
  out.mass_exact = kronecker(me, me);
  out.stiffness_exact = SparseMatrix(kronecker(ke, me) + kronecker(me, ke));
  return out;
}

namespace {

void assemble_2d_pair(const KnotVector& kv, const Rule& reference_rule, const std::vector<int>& pos, int n1,
                      SparseMatrix& mass, SparseMatrix& stiffness) {
  const int p = kv.degree();
  std::vector<Eigen::Triplet<double>> tm, tk;
  const std::vector<int> spans = kv.element_spans();
  for (int sx : spans) {
    const Rule rx = map_rule_to_element(reference_rule, kv[sx], kv[sx + 1]);
    for (int sy : spans) {
      const Rule ry = map_rule_to_element(reference_rule, kv[sy], kv[sy + 1]);
      for (std::size_t qx = 0; qx < rx.size(); ++qx) {
        const LocalBasis bx = eval_local_basis(kv, sx, rx.nodes[qx]);
        for (std::size_t qy = 0; qy < ry.size(); ++qy) {
          const LocalBasis by = eval_local_basis(kv, sy, ry.nodes[qy]);
          const double w = rx.weights[qx] * ry.weights[qy];
          for (int a = 0; a <= p; ++a) {
            for (int b = 0; b <= p; ++b) {
              const int ra = pos[bx.first + a], rb = pos[by.first + b];
              if (ra < 0 || rb < 0) continue;
              const int row = ra * n1 + rb;
              for (int c = 0; c <= p; ++c) {
                for (int d = 0; d <= p; ++d) {
                  const int ca = pos[bx.first + c], cb = pos[by.first + d];
                  if (ca < 0 || cb < 0) continue;
                  const int col = ca * n1 + cb;
                  const double nm = bx.values[a] * by.values[b] * bx.values[c] * by.values[d];
                  const double nk = bx.derivs[a] * by.values[b] * bx.derivs[c] * by.values[d] +
                                    bx.values[a] * by.derivs[b] * bx.values[c] * by.derivs[d];
                  tm.emplace_back(row, col, w * nm);
                  tk.emplace_back(row, col, w * nk);
                }
              }
            }
          }
        }
      }
    }
  }
  mass = SparseMatrix(n1 * n1, n1 * n1);
  stiffness = SparseMatrix(n1 * n1, n1 * n1);
  mass.setFromTriplets(tm.begin(), tm.end());
  stiffness.setFromTriplets(tk.begin(), tk.end());
}

}  // namespace

DiscreteOperator2D assemble_2d_direct(const KnotVector& kv, const BlockLayout& layout, const QuadratureSpec& q,
                                      int cap) {
  layout.validate();
  if (kv.degree() != layout.degree || !(kv == make_block_knots(layout))) {
    throw Error(ErrorCode::InconsistentLayout, "knot vector does not match the block layout");
  }
  const std::vector<int> keep = free_dof_list(kv.dimension(), layout.boundary);
  const int n1 = static_cast<int>(keep.size());
  check_2d_cap(n1, cap);
  const std::vector<int> pos = free_position(kv.dimension(), keep);
  DiscreteOperator2D out;
  out.n1 = n1;
  assemble_2d_pair(kv, make_rule(q, kv.degree()), pos, n1, out.mass, out.stiffness);
  assemble_2d_pair(kv, gauss_rule(kv.degree() + 1), pos, n1, out.mass_exact, out.stiffness_exact);
  return out;
}

}  // namespace rigaspec
