#include "rigaspec/budget.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <limits>
#include <numeric>
#include <string>

#include "rigaspec/error.hpp"

namespace rigaspec {

namespace {
constexpr double kPi = std::numbers::pi;
}

double ExactMode::operator()(double x) const {
  if (boundary == BoundaryCondition::Dirichlet) return std::numbers::sqrt2 * std::sin(index * kPi * x);
  if (index == 0) return 1.0;
  return std::numbers::sqrt2 * std::cos(index * kPi * x);
}

ExactMode exact_spectrum_1d(int j, BoundaryCondition bc) {
  const int lowest = bc == BoundaryCondition::Dirichlet ? 1 : 0;
  if (j < lowest) throw Error(ErrorCode::InvalidIndex, "exact mode index " + std::to_string(j) + " out of range");
  return ExactMode{j, bc, static_cast<double>(j) * j * kPi * kPi};
}

double exact_eigenvalue_2d(int j, int k) {
  if (j < 1 || k < 1) throw Error(ErrorCode::InvalidIndex, "2D mode indices start at 1");
  return (static_cast<double>(j) * j + static_cast<double>(k) * k) * kPi * kPi;
}

L2Projector::L2Projector(const KnotVector& kv, BoundaryCondition bc) : kv_(kv), bc_(bc), h_min_(1.0) {
  double h_max = 0.0;
  for (int s : kv_.element_spans()) h_max = std::max(h_max, kv_[s + 1] - kv_[s]);
  h_min_ = h_max;  // the resolution rule uses the coarsest element
}

int L2Projector::default_subdivisions(int j) const noexcept {
  return std::max(1, static_cast<int>(std::ceil(j * h_min_)) + 1);
}

const L2Projector::Table& L2Projector::table(int subdivisions) {
  auto it = tables_.find(subdivisions);
  if (it != tables_.end()) return it->second;
  const int p = kv_.degree();
  const Rule ref = gauss_rule(p + 6);
  Table t;
  for (int span : kv_.element_spans()) {
    const double a = kv_[span], b = kv_[span + 1];
    const double piece = (b - a) / subdivisions;
    for (int k = 0; k < subdivisions; ++k) {
      const double lo = a + k * piece;
      const double hi = k + 1 == subdivisions ? b : lo + piece;
      const Rule r = map_rule_to_element(ref, lo, hi);
      for (std::size_t q = 0; q < r.size(); ++q) {
        const LocalBasis lb = eval_local_basis(kv_, span, r.nodes[q]);
        t.x.push_back(r.nodes[q]);
        t.w.push_back(r.weights[q]);
        t.first.push_back(lb.first);
        t.values.insert(t.values.end(), lb.values.begin(), lb.values.end());
      }
    }
  }
  return tables_.emplace(subdivisions, std::move(t)).first->second;
}

double L2Projector::inner(const ExactMode& u, const Eigen::VectorXd& v, int subdivisions) {
  const int offset = bc_ == BoundaryCondition::Dirichlet ? 1 : 0;
  const int expected = kv_.dimension() - 2 * offset;
  if (v.size() != expected) {
    throw Error(ErrorCode::InvalidArgument, "coefficient length " + std::to_string(v.size()) +
                                                " does not match the constrained basis (" +
                                                std::to_string(expected) + ")");
  }
  if (subdivisions <= 0) subdivisions = default_subdivisions(u.index);
  const Table& t = table(subdivisions);
  const int p = kv_.degree();
  const int n = kv_.dimension();
  double sum = 0.0;
  for (std::size_t q = 0; q < t.x.size(); ++q) {
    double val = 0.0;
    for (int a = 0; a <= p; ++a) {
      const int i = t.first[q] + a;
      if (i < offset || i >= n - offset) continue;
      val += v[i - offset] * t.values[q * (p + 1) + a];
    }
    sum += t.w[q] * u(t.x[q]) * val;
  }
  return sum;
}

double l2_pair_inner(const ExactMode& u, const Eigen::VectorXd& v, const KnotVector& kv, BoundaryCondition bc,
                     int subdivisions) {
  L2Projector proj(kv, bc);
  return proj.inner(u, v, subdivisions);
}

std::vector<ModeErrorBudget> error_budget(const Spectrum& spectrum, const DiscreteOperator& op, int first,
                                          int last) {
  const int n = spectrum.size();
  if (last == 0) last = n;
  if (first < 1 || last > n || first > last) {
    throw Error(ErrorCode::ModeRange, "mode range [" + std::to_string(first) + ", " + std::to_string(last) +
                                          "] outside 1.." + std::to_string(n));
  }
  if (!spectrum.has_vectors()) throw Error(ErrorCode::InvalidArgument, "error budget needs eigenvectors");
  if (spectrum.eigenvectors.rows() != op.dimension()) {
    throw Error(ErrorCode::InvalidArgument, "spectrum does not belong to this operator");
  }

  const BoundaryCondition bc = op.layout.boundary;
  const int index_shift = bc == BoundaryCondition::Dirichlet ? 0 : -1;
  const double n0 = op.layout.reference_dofs();
  L2Projector proj(op.knots, bc);

  std::vector<ModeErrorBudget> out;
  out.reserve(last - first + 1);
  for (int pos = first; pos <= last; ++pos) {
    ModeErrorBudget b;
    b.position = pos;
    b.j = pos + index_shift;
    b.j_over_n0 = pos / n0;
    const ExactMode u = exact_spectrum_1d(b.j, bc);
    b.lambda_exact = u.eigenvalue;
    b.lambda_h = spectrum.eigenvalues[pos - 1];

    Eigen::VectorXd v = spectrum.eigenvectors.col(pos - 1);
    double c = proj.inner(u, v);
    if (c < 0.0) {
      v = -v;
      c = -c;
    }
    const double mass_e = op.mass_exact.quadratic_form(v);
    const double stiff_e = op.stiffness_exact.quadratic_form(v);
    const double stiff_h = op.stiffness.quadratic_form(v);
    const double lam = b.lambda_exact;

    b.ef_l2_sq = 1.0 - 2.0 * c + mass_e;
    b.l2_deficit = 1.0 - mass_e;
    if (lam > 0.0) {
      b.ev_rel = (b.lambda_h - lam) / lam;
      // a(u_j, v) = lambda_j (u_j, v) for any v in the trial space.
      b.ef_energy_rel_sq = (lam - 2.0 * lam * c + stiff_e) / lam;
      b.energy_gap = (stiff_e - stiff_h) / lam;
      b.pythagoras_residual = b.ev_rel + b.ef_l2_sq + b.energy_gap + b.l2_deficit - b.ef_energy_rel_sq;
    } else {
      b.ev_rel = b.ef_energy_rel_sq = b.energy_gap = b.pythagoras_residual = std::nan("");
    }
    out.push_back(b);
  }
  return out;
}

double leading_eigenvalue_error(const DiscreteOperator& op, const Spectrum& spectrum, int position) {
  if (position < 1 || position > spectrum.size()) throw Error(ErrorCode::ModeRange, "mode outside the spectrum");
  if (!spectrum.has_vectors()) throw Error(ErrorCode::InvalidArgument, "refinement needs eigenvectors");
  const int j = op.layout.boundary == BoundaryCondition::Dirichlet ? position : position - 1;
  const double lam = exact_spectrum_1d(j, op.layout.boundary).eigenvalue;
  if (lam == 0.0) throw Error(ErrorCode::InvalidIndex, "relative error undefined for the zero eigenvalue");
  const double rq = rayleigh_quotient(op, spectrum.eigenvectors.col(position - 1));
  return (rq - lam) / lam;
}

std::vector<Mode2DError> errors_2d(const Eigen::VectorXd& eigenvalues_1d) {
  const int n = static_cast<int>(eigenvalues_1d.size());
  std::vector<Mode2DError> rows;
  rows.reserve(static_cast<std::size_t>(n) * n);
  for (int j = 1; j <= n; ++j) {
    for (int k = 1; k <= n; ++k) {
      Mode2DError r;
      r.j = j;
      r.k = k;
      r.lambda_h = eigenvalues_1d[j - 1] + eigenvalues_1d[k - 1];
      r.lambda_exact = exact_eigenvalue_2d(j, k);
      r.ev_rel = (r.lambda_h - r.lambda_exact) / r.lambda_exact;
      rows.push_back(r);
    }
  }
  std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.lambda_h < b.lambda_h; });
  std::vector<double> exact_sorted(rows.size());
  std::transform(rows.begin(), rows.end(), exact_sorted.begin(), [](const auto& r) { return r.lambda_exact; });
  std::stable_sort(exact_sorted.begin(), exact_sorted.end());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    rows[i].rank = static_cast<int>(i) + 1;
    rows[i].lambda_exact_sorted = exact_sorted[i];
    rows[i].ev_rel_sorted = (rows[i].lambda_h - exact_sorted[i]) / exact_sorted[i];
  }
  return rows;
}

}  // namespace rigaspec

namespace rigaspec {

double unit_roundoff(Precision precision) noexcept {
  return precision == Precision::Extended ? 0.5 * std::numeric_limits<long double>::epsilon()
                                          : 0.5 * std::numeric_limits<double>::epsilon();
}

namespace {

template <typename T>
std::vector<double> refined_errors_impl(const DiscreteOperator& op) {
  using Mat = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;
  const Mat k = op.stiffness.to_dense().cast<T>();
  const Mat m = op.mass.to_dense().cast<T>();
  const Eigen::LLT<Mat> llt(m);
  if (llt.info() != Eigen::Success) throw Error(ErrorCode::IndefiniteMass, "mass matrix is not positive definite");
  Mat c = llt.matrixL().solve(k);
  c = llt.matrixL().solve(c.transpose()).eval();
  c = (T(0.5) * (c + c.transpose())).eval();
  Eigen::SelfAdjointEigenSolver<Mat> es(c);
  if (es.info() != Eigen::Success) throw Error(ErrorCode::NoConvergence, "symmetric eigensolver did not converge");
  const Mat vectors = llt.matrixU().solve(es.eigenvectors());

  const KnotVector& kv = op.knots;
  const int p = kv.degree();
  std::vector<int> first;
  std::vector<T> weights, values, derivs;
  for (int span : kv.element_spans()) {
    const Rule rule = map_rule_to_element(op.rule, kv[span], kv[span + 1]);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const LocalBasis lb = eval_local_basis(kv, span, rule.nodes[q]);
      first.push_back(lb.first);
      weights.push_back(static_cast<T>(rule.weights[q]));
      for (int a = 0; a <= p; ++a) {
        values.push_back(static_cast<T>(lb.values[a]));
        derivs.push_back(static_cast<T>(lb.derivs[a]));
      }
    }
  }

  const BoundaryCondition bc = op.layout.boundary;
  const int shift = bc == BoundaryCondition::Dirichlet ? 0 : -1;
  const T pi = std::acos(T(-1));
  std::vector<T> coef(kv.dimension());
  std::vector<double> out(vectors.cols());
  for (Eigen::Index col = 0; col < vectors.cols(); ++col) {
    std::fill(coef.begin(), coef.end(), T(0));
    for (std::size_t i = 0; i < op.free_dofs.size(); ++i) coef[op.free_dofs[i]] = vectors(static_cast<Eigen::Index>(i), col);
    T sm = 0, sk = 0;
    for (std::size_t q = 0; q < first.size(); ++q) {
      T val = 0, der = 0;
      for (int a = 0; a <= p; ++a) {
        val += coef[first[q] + a] * values[q * (p + 1) + a];
        der += coef[first[q] + a] * derivs[q * (p + 1) + a];
      }
      sm += weights[q] * val * val;
      sk += weights[q] * der * der;
    }
    const T j = static_cast<T>(col + 1 + shift);
    const T lam = j * j * pi * pi;
    out[col] = lam > 0 ? static_cast<double>((sk / sm - lam) / lam) : std::nan("");
  }
  return out;
}

}  // namespace

std::vector<double> refined_eigenvalue_errors(const DiscreteOperator& op, Precision precision) {
  if (precision == Precision::Extended) return refined_errors_impl<long double>(op);
  return refined_errors_impl<double>(op);
}

}  // namespace rigaspec
