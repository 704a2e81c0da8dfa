#include <doctest.h>

#include <cmath>
#include <numbers>

#include "helpers.hpp"
#include "rigaspec/outliers.hpp"

using namespace rigaspec;

TEST_SUITE("outliers") {
  TEST_CASE("predicted counts") {
    const BoundaryCondition neu = BoundaryCondition::Neumann;
    CHECK(count_outliers_iga(2) == 0);
    CHECK(count_outliers_iga(3) == 2);
    CHECK(count_outliers_iga(4) == 2);
    CHECK(count_outliers_iga(5) == 4);
    CHECK(count_outliers_iga(2, neu) == 2);
    CHECK(count_outliers_iga(3, neu) == 2);
    CHECK(count_outliers_iga(4, neu) == 4);
    CHECK(count_outliers(2, 5) == 5);
    CHECK(count_outliers(3, 1) == 4);
    CHECK(count_outliers(4, 2) == 8);
    check_error(ErrorCode::InvalidDegree, [] { count_outliers_iga(1); });
    check_error(ErrorCode::InvalidDegree, [] { count_outliers(0, 3); });
  }

  TEST_CASE("flagged run from the top") {
    std::vector<double> e(100, 1e-3);
    e[99] = 1.0;
    e[98] = 0.5;
    e[97] = 1e-3 * 5;  // below the factor
    e[50] = 1.0;       // not at the top
    const FlaggedRun r = flag_top_outliers(e);
    CHECK(r.median == doctest::Approx(1e-3));
    REQUIRE(r.positions.size() == 2);
    CHECK(r.positions[0] == 99);
    CHECK(r.positions[1] == 100);
  }

  TEST_CASE("frequency content of an interpolated sine") {
    const DiscreteOperator op = assemble_1d(iga_layout(64, 2), QuadratureSpec::gauss());
    const Spectrum s = solve_gevp(op);
    const int j = 5;
    const FrequencyContent fc = frequency_content(s.eigenvectors.col(j - 1), op.knots, 256);
    CHECK(fc.magnitude.size() == 257);
    CHECK(fc.dominant_bin() == j);
    CHECK(FrequencyContent::frequency(fc.dominant_bin()) == doctest::Approx(2.5));
    CHECK(fc.magnitude[j] == doctest::Approx(std::sqrt(2.0)).epsilon(1e-3));
    CHECK(fc.peak_to_median > 1e3);
  }

  TEST_CASE("sample count must resolve the basis") {
    const DiscreteOperator op = assemble_1d(iga_layout(64, 2), QuadratureSpec::gauss());
    const Eigen::VectorXd v = Eigen::VectorXd::Ones(op.dimension());
    check_error(ErrorCode::Undersampling, [&] { frequency_content(v, op.knots, 64); });
    check_error(ErrorCode::Undersampling, [&] { frequency_content(v, op.knots, 200); });
    CHECK(default_samples(64) == 128);
    CHECK(default_samples(65) == 256);
  }

  TEST_CASE("sampled function") {
    const KnotVector kv = make_open_uniform_knots(4, 1);
    const Eigen::VectorXd v = Eigen::Vector3d(1.0, 2.0, 3.0);
    const auto y = sample_function(v, kv, BoundaryCondition::Dirichlet, {0.0, 0.125, 0.5, 1.0});
    CHECK(y[0] == 0.0);
    CHECK(y[1] == doctest::Approx(0.5));
    CHECK(y[2] == doctest::Approx(2.0));
    CHECK(y[3] == doctest::Approx(0.0));
  }

  TEST_CASE("census of quadratic blocks") {
    const DiscreteOperator op = assemble_1d(riga_layout(192, 2, 64), QuadratureSpec::gauss());
    const OutlierReport r = outlier_census(op, solve_gevp(op));
    CHECK(r.predicted == 2);
    CHECK(r.predicted_iga == 0);
    CHECK(r.observed == 2);
    CHECK(r.predicted_all_flagged());
    REQUIRE(r.entries.size() == 2);
    CHECK(r.entries[0].position == 193);
    CHECK(r.entries[1].position == 194);
    for (const OutlierEntry& e : r.entries) {
      CHECK(e.flagged);
      CHECK(e.ratio >= kOutlierFactor);
    }
  }

  TEST_CASE("smooth quadratic basis has none") {
    const DiscreteOperator op = assemble_1d(iga_layout(128, 2), QuadratureSpec::gauss());
    const OutlierReport r = outlier_census(op, solve_gevp(op));
    CHECK(r.predicted == 0);
    CHECK(r.observed == 0);
    CHECK(r.entries.empty());
  }

  TEST_CASE("two-tone fit of the highest regular modes") {
    // Smooth IGA: the pair sums to the DOF count.
    const DiscreteOperator iga = assemble_1d(iga_layout(128, 2), QuadratureSpec::gauss());
    const Spectrum si = solve_gevp(iga);
    const AmFit fi = am_fit(si.eigenvectors.col(125), iga.knots, iga.dimension(), 128);
    CHECK(fi.two_peaks);
    CHECK(fi.defect_dofs == doctest::Approx(0.0));
    CHECK(fi.misfit < 0.2);

    // With separators the pair sums to N_e, so the DOF form is off by n - N_e.
    const DiscreteOperator riga = assemble_1d(riga_layout(192, 2, 64), QuadratureSpec::gauss());
    const Spectrum sr = solve_gevp(riga);
    const AmFit fr = am_fit(sr.eigenvectors.col(190), riga.knots, riga.dimension(), 192);
    CHECK(fr.two_peaks);
    CHECK(fr.defect_elements == doctest::Approx(0.0));
    CHECK(fr.defect_dofs == doctest::Approx(riga.dimension() - 192));
    CHECK(fr.misfit_any_phase <= fr.misfit + 1e-12);
  }
}
