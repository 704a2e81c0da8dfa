#include "rigaspec/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <numeric>

#include "rigaspec/error.hpp"

namespace rigaspec {

namespace {

// Legendre P_n(x) and its derivative by the three-term recurrence.
std::pair<double, double> legendre(int n, double x) {
  double p0 = 1.0, p1 = x;
  if (n == 0) return {1.0, 0.0};
  for (int k = 2; k <= n; ++k) {
    const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = pk;
  }
  const double dp = n * (x * p1 - p0) / (x * x - 1.0);
  return {p1, dp};
}

void check_order(int points, int min_points) {
  if (points < min_points || points > kMaxQuadraturePoints) {
    throw Error(ErrorCode::UnsupportedOrder,
                "quadrature point count " + std::to_string(points) + " outside [" +
                    std::to_string(min_points) + ", " + std::to_string(kMaxQuadraturePoints) + "]");
  }
}

// Enforce exact mirror symmetry; Newton leaves last-bit asymmetries otherwise.
void symmetrize(Rule& r) {
  const std::size_t n = r.size();
  for (std::size_t i = 0; i < n / 2; ++i) {
    const std::size_t j = n - 1 - i;
    const double x = 0.5 * (r.nodes[j] - r.nodes[i]);
    const double w = 0.5 * (r.weights[i] + r.weights[j]);
    r.nodes[i] = -x;
    r.nodes[j] = x;
    r.weights[i] = r.weights[j] = w;
  }
  if (n % 2 == 1) r.nodes[n / 2] = 0.0;
}

}  // namespace

double Rule::weight_sum() const noexcept {
  return std::accumulate(weights.begin(), weights.end(), 0.0);
}

std::string QuadratureSpec::describe() const {
  char buf[96];
  switch (kind) {
    case QuadratureKind::Gauss: std::snprintf(buf, sizeof buf, "gauss(%d)", points); break;
    case QuadratureKind::Lobatto: std::snprintf(buf, sizeof buf, "lobatto(%d)", points); break;
    case QuadratureKind::Blended: std::snprintf(buf, sizeof buf, "blended(%d,tau=%.17g)", points, tau); break;
  }
  return buf;
}

Rule gauss_rule(int points) {
  check_order(points, 1);
  Rule r;
  r.nodes.resize(points);
  r.weights.resize(points);
  for (int i = 0; i < points; ++i) {
    // Tricomi initial guess for the i-th root, counted from +1 downward.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (points + 0.5));
    for (int it = 0; it < 100; ++it) {
      const auto [p, dp] = legendre(points, x);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const auto [p, dp] = legendre(points, x);
    r.nodes[points - 1 - i] = x;
    r.weights[points - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  if (points == 1) {
    r.nodes[0] = 0.0;
    r.weights[0] = 2.0;
  }
  symmetrize(r);
  return r;
}

Rule lobatto_rule(int points) {
  check_order(points, 2);
  const int n = points - 1;  // interior nodes are the roots of P'_n
  Rule r;
  r.nodes.resize(points);
  r.weights.resize(points);
  r.nodes.front() = -1.0;
  r.nodes.back() = 1.0;
  for (int i = 1; i < n; ++i) {
    double x = -std::cos(std::numbers::pi * i / n);
    for (int it = 0; it < 100; ++it) {
      // Newton on P'_n using (1 - x^2) P''_n = 2x P'_n - n(n+1) P_n.
      const auto [p, dp] = legendre(n, x);
      const double d2p = (2.0 * x * dp - n * (n + 1.0) * p) / (1.0 - x * x);
      const double dx = dp / d2p;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    r.nodes[i] = x;
  }
  for (int i = 0; i < points; ++i) {
    const double p = legendre(n, r.nodes[i]).first;
    r.weights[i] = 2.0 / (n * (n + 1.0) * p * p);
  }
  symmetrize(r);
  return r;
}

Rule blended_rule(int points, double tau) {
  check_order(points, 2);
  const Rule g = gauss_rule(points);
  const Rule l = lobatto_rule(points);
  std::vector<std::pair<double, double>> merged;
  merged.reserve(g.size() + l.size());
  for (std::size_t q = 0; q < g.size(); ++q) merged.emplace_back(g.nodes[q], (1.0 - tau) * g.weights[q]);
  for (std::size_t q = 0; q < l.size(); ++q) merged.emplace_back(l.nodes[q], tau * l.weights[q]);
  std::stable_sort(merged.begin(), merged.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  Rule r;
  for (const auto& [x, w] : merged) {
    r.nodes.push_back(x);
    r.weights.push_back(w);
  }
  return r;
}

Rule map_rule_to_element(const Rule& rule, double a, double b) {
  if (!(a < b)) throw Error(ErrorCode::DegenerateElement, "element end points must satisfy a < b");
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  Rule out;
  out.nodes.resize(rule.size());
  out.weights.resize(rule.size());
  for (std::size_t q = 0; q < rule.size(); ++q) {
    out.nodes[q] = mid + half * rule.nodes[q];
    out.weights[q] = half * rule.weights[q];
  }
  return out;
}

Rule make_rule(const QuadratureSpec& spec, int degree) {
  const int n = spec.points_for_degree(degree);
  switch (spec.kind) {
    case QuadratureKind::Gauss: return gauss_rule(n);
    case QuadratureKind::Lobatto: return lobatto_rule(n);
    case QuadratureKind::Blended: return blended_rule(n, spec.tau);
  }
  throw Error(ErrorCode::InvalidArgument, "unknown quadrature kind");
}

}  // namespace rigaspec
