#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "rigaspec/quadrature.hpp"

using namespace rigaspec;

namespace {

double monomial_integral(int k) { return k % 2 == 1 ? 0.0 : 2.0 / (k + 1); }

double integrate_monomial(const Rule& r, int k) {
  return r.integrate([k](double x) { return std::pow(x, k); });
}

}  // namespace

TEST_SUITE("quadrature") {
  TEST_CASE("gauss rules") {
    const Rule g1 = gauss_rule(1);
    CHECK(g1.nodes == std::vector<double>{0.0});
    CHECK(g1.weights[0] == doctest::Approx(2.0));

    const Rule g2 = gauss_rule(2);
    CHECK(g2.nodes[0] == doctest::Approx(-0.5773502692).epsilon(1e-10));
    CHECK(g2.nodes[1] == doctest::Approx(0.5773502692).epsilon(1e-10));
    CHECK(g2.weights[0] == doctest::Approx(1.0));
    CHECK(g2.weights[1] == doctest::Approx(1.0));

    CHECK(std::abs(integrate_monomial(gauss_rule(3), 4) - 0.4) < 1e-14);
  }

  TEST_CASE("lobatto rules") {
    const Rule l2 = lobatto_rule(2);
    CHECK(l2.nodes == std::vector<double>{-1.0, 1.0});
    const Rule l3 = lobatto_rule(3);
    CHECK(l3.nodes[0] == -1.0);
    CHECK(std::abs(l3.nodes[1]) < 1e-15);
    CHECK(l3.nodes[2] == 1.0);
    CHECK(l3.weights[0] == doctest::Approx(1.0 / 3).epsilon(1e-14));
    CHECK(l3.weights[1] == doctest::Approx(4.0 / 3).epsilon(1e-14));
    CHECK(l3.weights[2] == doctest::Approx(1.0 / 3).epsilon(1e-14));

    CHECK(std::abs(integrate_monomial(lobatto_rule(4), 4) - 0.4) < 1e-14);
    // 3-point Lobatto gives 2/3 for x^4 (Simpson), not 0.4.
    CHECK(integrate_monomial(l3, 4) == doctest::Approx(2.0 / 3));
  }

  TEST_CASE("exactness degree, and failure one degree higher") {
    for (int n = 1; n <= 20; ++n) {
      const Rule g = gauss_rule(n);
      for (int k = 0; k <= 2 * n - 1; ++k) CHECK(std::abs(integrate_monomial(g, k) - monomial_integral(k)) < 1e-13);
      CHECK(std::abs(integrate_monomial(g, 2 * n) - monomial_integral(2 * n)) > 1e-12);
    }
    for (int n = 2; n <= 20; ++n) {
      const Rule l = lobatto_rule(n);
      for (int k = 0; k <= 2 * n - 3; ++k) CHECK(std::abs(integrate_monomial(l, k) - monomial_integral(k)) < 1e-13);
      CHECK(std::abs(integrate_monomial(l, 2 * n - 2) - monomial_integral(2 * n - 2)) > 1e-12);
    }
  }

  TEST_CASE("symmetry and weight sums") {
    for (int n = 2; n <= 32; ++n) {
      for (const Rule& r : {gauss_rule(n), lobatto_rule(n)}) {
        CHECK(r.weight_sum() == doctest::Approx(2.0).epsilon(1e-13));
        for (std::size_t q = 0; q < r.size(); ++q) {
          CHECK(r.nodes[q] == doctest::Approx(-r.nodes[r.size() - 1 - q]).epsilon(1e-13));
          CHECK(r.weights[q] == doctest::Approx(r.weights[r.size() - 1 - q]).epsilon(1e-12));
          if (q > 0) CHECK(r.nodes[q] > r.nodes[q - 1]);
        }
      }
    }
  }

  TEST_CASE("blended rules") {
    const Rule g = gauss_rule(3);
    const Rule b0 = blended_rule(3, 0.0);
    double s = 0.0;
    for (double w : b0.weights) s += w;
    CHECK(s == doctest::Approx(2.0));
    for (int k = 0; k <= 8; ++k) CHECK(integrate_monomial(b0, k) == doctest::Approx(integrate_monomial(g, k)));

    const Rule b = blended_rule(3, 2.0 / 3);
    CHECK(b.size() == 6);
    for (double tau : {2.0 / 3, 1.8, -0.5}) {
      const Rule r = blended_rule(3, tau);
      CHECK(r.weight_sum() == doctest::Approx(2.0).epsilon(1e-13));
      for (int k = 0; k <= 8; ++k) {
        const double want = (1 - tau) * integrate_monomial(g, k) + tau * integrate_monomial(lobatto_rule(3), k);
        CHECK(integrate_monomial(r, k) == doctest::Approx(want).epsilon(1e-13));
      }
    }
    // tau = 1.8: Gauss weights scaled by -0.8.
    const Rule nc = blended_rule(3, 1.8);
    double gauss_part = 0.0, lobatto_part = 0.0;
    for (std::size_t q = 0; q < nc.size(); ++q) {
      const bool on_gauss = std::abs(std::abs(nc.nodes[q]) - std::sqrt(0.6)) < 1e-12 ||
                            (nc.nodes[q] == 0.0 && nc.weights[q] < 0.0);
      (on_gauss ? gauss_part : lobatto_part) += nc.weights[q];
    }
    CHECK(gauss_part == doctest::Approx(-0.8 * 2.0));
    CHECK(lobatto_part == doctest::Approx(1.8 * 2.0));
  }

  TEST_CASE("mapping to elements") {
    const Rule m = map_rule_to_element(gauss_rule(1), 0.0, 0.5);
    CHECK(m.nodes[0] == doctest::Approx(0.25));
    CHECK(m.weights[0] == doctest::Approx(0.5));
    const Rule m2 = map_rule_to_element(gauss_rule(2), 0.0, 1.0);
    CHECK(m2.nodes[0] == doctest::Approx(0.2113248654).epsilon(1e-10));
    CHECK(m2.nodes[1] == doctest::Approx(0.7886751346).epsilon(1e-10));
    CHECK(map_rule_to_element(lobatto_rule(5), 0.3, 0.37).weight_sum() == doctest::Approx(0.07).epsilon(1e-13));
    check_error(ErrorCode::DegenerateElement, [] { map_rule_to_element(gauss_rule(2), 1.0, 1.0); });
  }

  TEST_CASE("order limits") {
    check_error(ErrorCode::UnsupportedOrder, [] { gauss_rule(0); });
    check_error(ErrorCode::UnsupportedOrder, [] { gauss_rule(33); });
    check_error(ErrorCode::UnsupportedOrder, [] { lobatto_rule(1); });
    check_error(ErrorCode::UnsupportedOrder, [] { blended_rule(1, 0.5); });
    CHECK(make_rule(QuadratureSpec::gauss(), 2).size() == 3);
    CHECK(make_rule(QuadratureSpec::lobatto(), 4).size() == 5);
  }
}
