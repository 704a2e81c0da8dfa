#pragma once

#include <string>
#include <vector>

namespace rigaspec {

/// Nodes and weights of a one-dimensional rule. Pure Gauss and Lobatto rules
/// have strictly increasing nodes; blends may repeat a node shared by both
/// constituents (each copy carries its own weight).
struct Rule {
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const noexcept { return nodes.size(); }
  double weight_sum() const noexcept;

  template <class F>
  double integrate(F&& f) const {
    double s = 0.0;
    for (std::size_t q = 0; q < nodes.size(); ++q) s += weights[q] * f(nodes[q]);
    return s;
  }
};

enum class QuadratureKind { Gauss, Lobatto, Blended };

/// Per-element quadrature choice. `points == 0` selects the default p + 1.
/// For blends, `tau` is the Lobatto fraction: tau = 0 is pure Gauss, tau = 1
/// pure Lobatto; values outside [0, 1] give non-convex blends.
struct QuadratureSpec {
  QuadratureKind kind = QuadratureKind::Gauss;
  int points = 0;
  double tau = 0.0;

  int points_for_degree(int degree) const noexcept { return points > 0 ? points : degree + 1; }
  std::string describe() const;

  static QuadratureSpec gauss(int points = 0) { return {QuadratureKind::Gauss, points, 0.0}; }
  static QuadratureSpec lobatto(int points = 0) { return {QuadratureKind::Lobatto, points, 1.0}; }
  static QuadratureSpec blended(double tau, int points = 0) { return {QuadratureKind::Blended, points, tau}; }
};

inline constexpr int kMaxQuadraturePoints = 32;

/// Gauss-Legendre rule on [-1, 1], exact for degree 2n - 1.
Rule gauss_rule(int points);
/// Gauss-Lobatto-Legendre rule on [-1, 1] including both end points, exact for degree 2n - 3.
Rule lobatto_rule(int points);
/// (1 - tau) * Gauss + tau * Lobatto, nodes merged in increasing order.
Rule blended_rule(int points, double tau);
/// Affine image of a reference rule on [a, b].
Rule map_rule_to_element(const Rule& rule, double a, double b);

/// Reference rule selected by `spec` for a degree-p discretization.
Rule make_rule(const QuadratureSpec& spec, int degree);

}  // namespace rigaspec
