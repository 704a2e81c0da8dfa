#include <doctest.h>

#include <cmath>
#include <set>

#include "helpers.hpp"
#include "rigaspec/stopping_bands.hpp"

using namespace rigaspec;

TEST_SUITE("stopping-bands") {
  TEST_CASE("partition of a quadratic layout") {
    const BlockLayout layout = riga_layout(12, 2, 4);
    const KnotVector kv = make_block_knots(layout);
    const DofPartition part = partition_dofs(kv, layout);
    CHECK(part.block_count == 3);
    CHECK(part.interface.size() == 2);
    CHECK(part.bubble.size() + part.interface.size() == static_cast<std::size_t>(layout.free_dimension()));
    // Every block keeps N_e + p - 2 = 4 bubbles.
    CHECK(part.bubbles_of(0).size() == 4);
    CHECK(part.bubbles_of(1).size() == 4);
    CHECK(part.bubble.size() == 12);
    std::set<int> all(part.bubble.begin(), part.bubble.end());
    all.insert(part.interface.begin(), part.interface.end());
    CHECK(all.size() == static_cast<std::size_t>(layout.free_dimension()));
  }

  TEST_CASE("partition needs C0 separators and Dirichlet") {
    BlockLayout layout = riga_layout(12, 3, 4);
    layout.separator_continuity = 1;
    check_error(ErrorCode::UnsupportedContinuity,
                [&] { partition_dofs(make_block_knots(layout), layout); });
    const BlockLayout neu = riga_layout(12, 2, 4, BoundaryCondition::Neumann);
    check_error(ErrorCode::InvalidArgument, [&] { partition_dofs(make_block_knots(neu), neu); });
  }

  TEST_CASE("linear bubble eigenvalue") {
    // Three linear elements per block leave two interior hats.
    const DiscreteOperator op = assemble_1d(riga_layout(30, 1, 3), QuadratureSpec::gauss());
    const DofPartition part = partition_dofs(op.knots, op.layout);
    const auto local = local_bubble_spectra(op, part);
    REQUIRE(local.size() == 10);
    CHECK(local[4].eigenvalues.size() == 2);
  }

  TEST_CASE("bands of a ten-block quadratic layout") {
    const DiscreteOperator op = assemble_1d(riga_layout(100, 2, 10), QuadratureSpec::gauss());
    const DofPartition part = partition_dofs(op.knots, op.layout);
    const Spectrum s = solve_gevp(op);
    const auto local = local_bubble_spectra(op, part);
    const StoppingBandReport r = detect_stopping_bands(s, local, op.layout);
    CHECK(r.expected_count == 10);
    CHECK(r.band_count() == 10);
    CHECK(r.matched_count == 10);
    CHECK(r.interior_blocks.size() == 8);
    for (const StoppingBand& b : r.bands) {
      CHECK(b.multiplicity == 8);
      CHECK(b.rel_gap < 1e-12);
      const Eigen::VectorXd v = reconstruct_stopping_mode(op, part, b.lambda_b);
      CHECK(v.size() == op.dimension());
      CHECK(op.mass_exact.quadratic_form(v) == doctest::Approx(1.0));
      CHECK(eigen_residual(op, v, b.lambda_b) < 1e-9);
    }
  }

  TEST_CASE("reconstructed mode spans the global eigenspace") {
    const DiscreteOperator op = assemble_1d(riga_layout(60, 2, 6), QuadratureSpec::gauss());
    const DofPartition part = partition_dofs(op.knots, op.layout);
    const Spectrum s = solve_gevp(op);
    const StoppingBandReport r = detect_stopping_bands(s, local_bubble_spectra(op, part), op.layout);
    REQUIRE(r.band_count() > 0);
    const StoppingBand& b = r.bands.front();
    const Eigen::VectorXd v = reconstruct_stopping_mode(op, part, b.lambda_b);
    // Project on the global eigenvectors sharing lambda_b; nothing should remain.
    const Eigen::MatrixXd m = op.mass.to_dense();
    Eigen::VectorXd rest = v;
    for (int j = 0; j < s.size(); ++j) {
      if (std::abs(s.eigenvalues[j] - b.lambda_b) > 1e-8 * b.lambda_b) continue;
      const Eigen::VectorXd u = s.eigenvectors.col(j);
      rest -= u.dot(m * v) * u;
    }
    CHECK(std::sqrt(rest.dot(m * rest) / v.dot(m * v)) < 1e-7);
  }

  TEST_CASE("finite elements carry one band") {
    const DiscreteOperator op = assemble_1d(fea_layout(40, 2), QuadratureSpec::gauss());
    const DofPartition part = partition_dofs(op.knots, op.layout);
    const StoppingBandReport r = detect_stopping_bands(solve_gevp(op), local_bubble_spectra(op, part), op.layout);
    CHECK(r.band_count() == 1);
    CHECK(r.expected_count == 1);
    CHECK(r.matched_count == 1);
    // Single quadratic bubble on [0, h]: lambda = 10 / h^2.
    CHECK(r.bands[0].lambda_b == doctest::Approx(10.0 * 40 * 40).epsilon(1e-12));
  }
}
