#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>
#include <sstream>

#include "helpers.hpp"
#include "rigaspec/assembly.hpp"
#include "rigaspec/eigensolve.hpp"

using namespace rigaspec;

TEST_SUITE("assembly") {
  TEST_CASE("linear two-element problem") {
    const DiscreteOperator op = assemble_1d(iga_layout(2, 1), QuadratureSpec::gauss());
    REQUIRE(op.dimension() == 1);
    CHECK(op.mass(0, 0) == doctest::Approx(1.0 / 3).epsilon(1e-14));
    CHECK(op.stiffness(0, 0) == doctest::Approx(4.0).epsilon(1e-14));
  }

  TEST_CASE("full-basis invariants") {
    for (const BlockLayout& l : {iga_layout(3, 2), riga_layout(12, 3, 4), fea_layout(5, 2), iga_layout(9, 5)}) {
      const KnotVector kv = make_block_knots(l);
      const MassStiffness ms = assemble_full(kv, gauss_rule(l.degree + 1));
      const Eigen::MatrixXd m = ms.mass.to_dense(), k = ms.stiffness.to_dense();
      CHECK(m.sum() == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(k.rowwise().sum().cwiseAbs().maxCoeff() < 1e-10 * k.cwiseAbs().maxCoeff());
      CHECK(ms.mass.bandwidth() <= l.degree);
      CHECK(ms.stiffness.occupied_bandwidth() <= l.degree);
      const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(k, Eigen::EigenvaluesOnly);
      CHECK(es.eigenvalues().minCoeff() >= -1e-10);
    }
  }

  TEST_CASE("gauss p+1 equals the exact matrices") {
    const DiscreteOperator op = assemble_1d(riga_layout(30, 3, 10), QuadratureSpec::gauss());
    CHECK((op.mass.to_dense() - op.mass_exact.to_dense()).cwiseAbs().maxCoeff() < 1e-13);
    CHECK((op.stiffness.to_dense() - op.stiffness_exact.to_dense()).cwiseAbs().maxCoeff() < 1e-13 * 900);
  }

  TEST_CASE("blended stiffness equals the exact stiffness in 1D") {
    for (double tau : {2.0 / 3, 1.0, 1.8}) {
      const DiscreteOperator op = assemble_1d(iga_layout(20, 2), QuadratureSpec::blended(tau));
      const double scale = op.stiffness_exact.to_dense().cwiseAbs().maxCoeff();
      CHECK((op.stiffness.to_dense() - op.stiffness_exact.to_dense()).cwiseAbs().maxCoeff() < 1e-12 * scale);
      CHECK((op.mass.to_dense() - op.mass_exact.to_dense()).cwiseAbs().maxCoeff() > 1e-6);
    }
  }

  TEST_CASE("dimensions and boundary conditions") {
    CHECK(assemble_1d(iga_layout(10, 2), QuadratureSpec::gauss()).dimension() == 10);
    CHECK(assemble_1d(iga_layout(10, 2, BoundaryCondition::Neumann), QuadratureSpec::gauss()).dimension() == 12);
    CHECK(assemble_1d(fea_layout(500, 2), QuadratureSpec::gauss()).dimension() == 999);
    CHECK(assemble_1d(riga_layout(1000, 2, 100), QuadratureSpec::gauss()).dimension() == 1009);
  }

  TEST_CASE("separator coupling pattern") {
    // Quadratic rIGA, blocks of 10: the separator row reaches p neighbours each side.
    const BlockLayout l = riga_layout(30, 2, 10);
    const DiscreteOperator op = assemble_1d(l, QuadratureSpec::gauss());
    const KnotVector& kv = op.knots;
    const auto it = std::lower_bound(kv.knots().begin(), kv.knots().end(), 1.0 / 3 - 1e-12);
    const int sep_full = static_cast<int>(it - kv.knots().begin()) - 1;
    const int row = sep_full - 1;
    int lo = row, hi = row;
    for (int c = 0; c < op.dimension(); ++c) {
      if (op.stiffness(row, c) != 0.0) {
        lo = std::min(lo, c);
        hi = std::max(hi, c);
      }
    }
    CHECK(row - lo == 2);
    CHECK(hi - row == 2);
    // The two neighbours on either side do not couple across the separator.
    CHECK(op.stiffness(row - 1, row + 1) == 0.0);
  }

  TEST_CASE("errors") {
    check_error(ErrorCode::InconsistentLayout,
                [] { assemble_1d(make_open_uniform_knots(10, 2), riga_layout(10, 2, 5), QuadratureSpec::gauss()); });
    check_error(ErrorCode::SingularMass, [] { assemble_1d(iga_layout(8, 2), QuadratureSpec::blended(-40.0)); });
  }

  TEST_CASE("2D tensor operators") {
    const DiscreteOperator op1 = assemble_1d(iga_layout(2, 1), QuadratureSpec::gauss());
    const DiscreteOperator2D op2 = assemble_2d_tensor(op1);
    REQUIRE(op2.dimension() == 1);
    CHECK(op2.mass.coeff(0, 0) == doctest::Approx(1.0 / 9));
    CHECK(op2.stiffness.coeff(0, 0) == doctest::Approx(8.0 / 3));
    const Spectrum s = solve_gevp(op2);
    CHECK(s.eigenvalues[0] == doctest::Approx(24.0));

    const DiscreteOperator q = assemble_1d(riga_layout(8, 2, 4), QuadratureSpec::gauss());
    const DiscreteOperator2D t = assemble_2d_tensor(q);
    const DiscreteOperator2D d = assemble_2d_direct(q.knots, q.layout, q.quadrature);
    CHECK(t.dimension() == q.dimension() * q.dimension());
    CHECK(Eigen::MatrixXd(t.mass - d.mass).cwiseAbs().maxCoeff() < 1e-14);
    CHECK(Eigen::MatrixXd(t.stiffness - d.stiffness).cwiseAbs().maxCoeff() < 1e-11);
    check_error(ErrorCode::DimensionOverflow, [&] { assemble_2d_tensor(q, 10); });
  }

  TEST_CASE("matrix dump") {
    const DiscreteOperator op = assemble_1d(iga_layout(3, 2), QuadratureSpec::gauss());
    std::ostringstream os;
    op.mass.write_dump(os);
    std::istringstream is(os.str());
    int r = 0, c = 0, lines = 0;
    double v = 0.0;
    while (is >> r >> c >> v) {
      CHECK(v == op.mass(r, c));
      CHECK(c >= r);
      ++lines;
    }
    CHECK(lines == 3 + 2 + 1);
  }
}
