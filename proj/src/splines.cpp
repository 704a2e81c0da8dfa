#include "rigaspec/splines.hpp"

#include <algorithm>
#include <string>

#include "rigaspec/error.hpp"

namespace rigaspec {

namespace {

double safe_ratio(double num, double den) { return den == 0.0 ? 0.0 : num / den; }

// Last index s with knots[s] < knots[s+1].
int last_nonempty_span(std::span<const double> knots) {
  for (int s = static_cast<int>(knots.size()) - 2; s >= 0; --s) {
    if (knots[s] < knots[s + 1]) return s;
  }
  return -1;
}

bool in_degree_zero(std::span<const double> knots, int k, double x, int last_span) {
  if (knots[k] <= x && x < knots[k + 1]) return true;
  return x == knots.back() && k == last_span;
}

// N_{i,deg}(x) over the full knot sequence by the triangular Cox-de Boor scheme.
double basis_value(std::span<const double> knots, int i, int deg, double x, int last_span) {
  std::vector<double> n(deg + 1);
  for (int j = 0; j <= deg; ++j) n[j] = in_degree_zero(knots, i + j, x, last_span) ? 1.0 : 0.0;
  for (int k = 1; k <= deg; ++k) {
    for (int j = 0; j <= deg - k; ++j) {
      const int a = i + j;
      const double left = safe_ratio(x - knots[a], knots[a + k] - knots[a]);
      const double right = safe_ratio(knots[a + k + 1] - x, knots[a + k + 1] - knots[a + 1]);
      n[j] = left * n[j] + right * n[j + 1];
    }
  }
  return n[0];
}

void check_eval_args(const KnotVector& kv, int i, double x) {
  if (i < 0 || i >= kv.dimension()) {
    throw Error(ErrorCode::IndexOutOfRange,
                "basis index " + std::to_string(i) + " outside [0, " +
                    std::to_string(kv.dimension()) + ")");
  }
  if (x < kv.front() || x > kv.back()) {
    throw Error(ErrorCode::InvalidArgument, "evaluation point outside the knot range");
  }
}

// Values of the deg + 1 functions non-zero on span s (algorithm A2.2 of the NURBS book).
std::vector<double> local_values(std::span<const double> u, int s, int deg, double x) {
  std::vector<double> n(deg + 1), left(deg + 1), right(deg + 1);
  n[0] = 1.0;
  for (int j = 1; j <= deg; ++j) {
    left[j] = x - u[s + 1 - j];
    right[j] = u[s + j] - x;
    double saved = 0.0;
    for (int r = 0; r < j; ++r) {
      const double tmp = n[r] / (right[r + 1] + left[j - r]);
      n[r] = saved + right[r + 1] * tmp;
      saved = left[j - r] * tmp;
    }
    n[j] = saved;
  }
  return n;
}

}  // namespace

KnotVector::KnotVector(int degree, std::vector<double> knots) : degree_(degree), knots_(std::move(knots)) {
  if (degree_ < 1) throw Error(ErrorCode::InvalidArgument, "degree must be >= 1");
  if (static_cast<int>(knots_.size()) - degree_ - 1 <= 0) {
    throw Error(ErrorCode::InvalidArgument, "knot vector too short for the degree");
  }
  if (!std::is_sorted(knots_.begin(), knots_.end())) {
    throw Error(ErrorCode::InvalidArgument, "knots must be non-decreasing");
  }
  if (!(knots_.front() < knots_.back())) {
    throw Error(ErrorCode::InvalidArgument, "knot vector spans an empty interval");
  }
  for (double v : unique_knots()) {
    const int m = multiplicity(v);
    const bool end = v == knots_.front() || v == knots_.back();
    if (m > (end ? degree_ + 1 : degree_)) {
      throw Error(ErrorCode::InvalidArgument,
                  "knot multiplicity " + std::to_string(m) + " exceeds the degree");
    }
  }
  open_ = multiplicity(knots_.front()) == degree_ + 1 && multiplicity(knots_.back()) == degree_ + 1;
}

std::vector<double> KnotVector::unique_knots() const {
  std::vector<double> out(knots_);
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

int KnotVector::multiplicity(double value) const noexcept {
  const auto [lo, hi] = std::equal_range(knots_.begin(), knots_.end(), value);
  return static_cast<int>(hi - lo);
}

int KnotVector::find_span(double x) const {
  if (x < front() || x > back()) throw Error(ErrorCode::InvalidArgument, "point outside the knot range");
  if (x == back()) return last_nonempty_span(knots_);
  const auto it = std::upper_bound(knots_.begin(), knots_.end(), x);
  return static_cast<int>(it - knots_.begin()) - 1;
}

std::vector<int> KnotVector::element_spans() const {
  std::vector<int> spans;
  for (int s = degree_; s + 1 < static_cast<int>(knots_.size()) - degree_; ++s) {
    if (knots_[s] < knots_[s + 1]) spans.push_back(s);
  }
  return spans;
}

void BlockLayout::validate() const {
  if (elements < 1) throw Error(ErrorCode::InvalidArgument, "element count must be >= 1");
  if (degree < 1) throw Error(ErrorCode::InvalidArgument, "degree must be >= 1");
  if (block_size < 1 || block_size > elements) {
    throw Error(ErrorCode::InvalidArgument, "block size must lie in [1, elements]");
  }
  if (separator_continuity < 0 || separator_continuity > degree - 1) {
    throw Error(ErrorCode::InvalidArgument, "separator continuity must lie in [0, p-1]");
  }
}

std::vector<int> BlockLayout::separator_elements() const {
  std::vector<int> out;
  for (int b = 1; b < block_count(); ++b) out.push_back(b * block_size);
  return out;
}

int BlockLayout::block_of_element(int e) const noexcept {
  return std::min(e / block_size, block_count() - 1);
}

int BlockLayout::dimension() const noexcept {
  return elements + degree + (degree - 1 - separator_continuity) * separator_count();
}

int BlockLayout::free_dimension() const noexcept {
  return dimension() - (boundary == BoundaryCondition::Dirichlet ? 2 : 0);
}

int BlockLayout::reference_dofs() const noexcept {
  return elements + degree - (boundary == BoundaryCondition::Dirichlet ? 2 : 0);
}

BlockLayout iga_layout(int elements, int degree, BoundaryCondition bc) {
  return BlockLayout{elements, degree, elements, degree - 1, bc};
}

BlockLayout fea_layout(int elements, int degree, BoundaryCondition bc) {
  return BlockLayout{elements, degree, 1, 0, bc};
}

BlockLayout riga_layout(int elements, int degree, int block_size, BoundaryCondition bc) {
  return BlockLayout{elements, degree, block_size, 0, bc};
}

KnotVector make_open_uniform_knots(int elements, int degree) {
  if (elements < 1) throw Error(ErrorCode::InvalidArgument, "element count must be >= 1");
  if (degree < 1) throw Error(ErrorCode::InvalidArgument, "degree must be >= 1");
  return make_block_knots(iga_layout(elements, degree));
}

KnotVector make_block_knots(const BlockLayout& layout) {
  layout.validate();
  const int p = layout.degree;
  const int ne = layout.elements;
  std::vector<bool> is_separator(ne, false);
  for (int e : layout.separator_elements()) is_separator[e] = true;

  std::vector<double> knots(p + 1, 0.0);
  knots.reserve(layout.dimension() + p + 1);
  for (int e = 1; e < ne; ++e) {
    const double value = static_cast<double>(e) / static_cast<double>(ne);
    const int m = is_separator[e] ? p - layout.separator_continuity : 1;
    knots.insert(knots.end(), m, value);
  }
  knots.insert(knots.end(), p + 1, 1.0);
  return KnotVector(p, std::move(knots));
}

double eval_basis(const KnotVector& kv, int i, double x) {
  check_eval_args(kv, i, x);
  return basis_value(kv.knots(), i, kv.degree(), x, last_nonempty_span(kv.knots()));
}

double eval_basis_deriv(const KnotVector& kv, int i, double x) {
  check_eval_args(kv, i, x);
  const auto u = kv.knots();
  const int p = kv.degree();
  const int last = last_nonempty_span(u);
  const double a = safe_ratio(static_cast<double>(p), u[i + p] - u[i]);
  const double b = safe_ratio(static_cast<double>(p), u[i + p + 1] - u[i + 1]);
  double d = 0.0;
  if (a != 0.0) d += a * basis_value(u, i, p - 1, x, last);
  if (b != 0.0) d -= b * basis_value(u, i + 1, p - 1, x, last);
  return d;
}

LocalBasis eval_local_basis(const KnotVector& kv, int span, double x) {
  const auto u = kv.knots();
  const int p = kv.degree();
  LocalBasis out;
  out.first = span - p;
  out.values = local_values(u, span, p, x);
  out.derivs.assign(p + 1, 0.0);
  // Lower-degree functions N_{span-p+1 .. span, p-1}.
  const std::vector<double> low = local_values(u, span, p - 1, x);
  for (int r = 0; r <= p; ++r) {
    const int i = span - p + r;
    double d = 0.0;
    if (r >= 1) d += p * low[r - 1] / (u[i + p] - u[i]);
    if (r <= p - 1) d -= p * low[r] / (u[i + p + 1] - u[i + 1]);
    out.derivs[r] = d;
  }
  return out;
}

std::vector<double> greville_abscissae(const KnotVector& kv) {
  const int p = kv.degree();
  std::vector<double> g(kv.dimension());
  for (int i = 0; i < kv.dimension(); ++i) {
    double s = 0.0;
    for (int k = 1; k <= p; ++k) s += kv[i + k];
    g[i] = s / p;
  }
  return g;
}

int continuity_at(const KnotVector& kv, double value) {
  const int m = kv.multiplicity(value);
  if (m == 0) throw Error(ErrorCode::NotAKnot, "value does not appear in the knot vector");
  return kv.degree() - m;
}

}  // namespace rigaspec
