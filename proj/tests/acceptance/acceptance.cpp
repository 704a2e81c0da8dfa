// One PASS/FAIL line per acceptance criterion; exit status 1 when any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "rigaspec/branches.hpp"
#include "rigaspec/budget.hpp"
#include "rigaspec/convergence.hpp"
#include "rigaspec/outliers.hpp"
#include "rigaspec/stopping_bands.hpp"

using namespace rigaspec;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) pass = false;
    if (!detail.empty()) detail += "; ";
    detail += what + (ok ? "" : " [x]");
  }
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

Outcome pythagoras() {
  Outcome o;
  const auto t0 = Clock::now();
  double worst = 0.0;
  for (int p : {2, 3}) {
    for (int ne : {32, 64}) {
      const DiscreteOperator op = assemble_1d(iga_layout(ne, p), QuadratureSpec::gauss());
      for (const ModeErrorBudget& b : error_budget(solve_gevp(op), op)) {
        worst = std::max(worst, std::abs(b.ev_rel + b.ef_l2_sq - b.ef_energy_rel_sq));
      }
    }
  }
  const double dt = seconds_since(t0);
  o.require(worst < 1e-7, "max |identity residual| " + fmt("%.2e", worst));
  o.require(dt < 30.0, "runtime " + fmt("%.2f", dt) + " s");
  return o;
}

Outcome modified_identity() {
  Outcome o;
  const auto t0 = Clock::now();
  double worst = 0.0, gap = 0.0;
  for (int p : {2, 3}) {
    for (int ne : {32, 64}) {
      for (double tau : {2.0 / 3, 1.0, 1.8}) {
        const DiscreteOperator op = assemble_1d(iga_layout(ne, p), QuadratureSpec::blended(tau));
        for (const ModeErrorBudget& b : error_budget(solve_gevp(op), op)) {
          const double sum = b.ev_rel + b.ef_l2_sq + b.energy_gap + b.l2_deficit;
          worst = std::max(worst, std::abs(sum - b.ef_energy_rel_sq));
          gap = std::max(gap, std::abs(b.energy_gap));
        }
      }
    }
  }
  const double dt = seconds_since(t0);
  o.require(worst < 1e-7, "max |four-term residual| " + fmt("%.2e", worst));
  o.require(gap < 1e-10, "max |energy_gap| " + fmt("%.2e", gap));
  o.require(dt < 60.0, "runtime " + fmt("%.2f", dt) + " s");
  return o;
}

Outcome leading_coefficients() {
  Outcome o;
  const double h = 1.0 / 64, lam = kPi * kPi;
  const double scale = lam * lam * std::pow(h, 4);
  const DiscreteOperator g = assemble_1d(iga_layout(64, 2), QuadratureSpec::gauss());
  const DiscreteOperator l = assemble_1d(iga_layout(64, 2), QuadratureSpec::lobatto());
  const double eg = leading_eigenvalue_error(g, solve_gevp(g));
  const double el = leading_eigenvalue_error(l, solve_gevp(l));
  const double want_g = -scale / 1440, want_l = scale / 2880;
  o.require(std::abs(eg - want_g) <= 0.1 * std::abs(want_g),
            "Gauss " + fmt("%.4e", eg) + " vs " + fmt("%.4e", want_g));
  o.require(std::abs(el - want_l) <= 0.1 * std::abs(want_l),
            "Lobatto " + fmt("%.4e", el) + " vs " + fmt("%.4e", want_l));
  o.require(std::abs(eg / el + 2.0) <= 0.1, "ratio " + fmt("%.4f", eg / el));
  return o;
}

Outcome slopes() {
  Outcome o;
  const auto t0 = Clock::now();
  const std::vector<int> meshes{8, 16, 32, 64};
  auto slope = [&](int p, const QuadratureSpec& q) {
    const auto pts = convergence_study([p](int n) { return iga_layout(n, p); }, q, meshes, 1);
    std::vector<double> h, e;
    for (const auto& c : pts) {
      h.push_back(c.h);
      e.push_back(std::abs(c.ev_rel));
    }
    return fit_log_slope(h, e).slope;
  };
  const double s2 = slope(2, QuadratureSpec::gauss());
  const double s2b = slope(2, QuadratureSpec::blended(2.0 / 3));
  const double s3 = slope(3, QuadratureSpec::gauss());
  const double dt = seconds_since(t0);
  o.require(std::abs(s2 - 4.0) <= 0.1, "p=2 Gauss " + fmt("%.3f", s2));
  o.require(std::abs(s2b - 6.0) <= 0.3, "p=2 tau=2/3 " + fmt("%.3f", s2b));
  o.require(std::abs(s3 - 6.0) <= 0.2, "p=3 Gauss " + fmt("%.3f", s3));
  o.require(dt < 10.0, "runtime " + fmt("%.2f", dt) + " s");
  return o;
}

Outcome outlier_census_check() {
  Outcome o;
  // Smooth-basis outliers per degree 2..8; each C0 separator adds p - 1.
  const int table_iga[] = {0, 2, 2, 4, 4, 6, 6};
  int mismatches = 0;
  for (int p = 2; p <= 8; ++p) {
    for (int sep = 0; sep <= 3; ++sep) {
      if (count_outliers(p, sep) != table_iga[p - 2] + (p - 1) * sep) ++mismatches;
    }
  }
  o.require(mismatches == 0, "table mismatches " + std::to_string(mismatches));

  const DiscreteOperator op = assemble_1d(riga_layout(192, 2, 64), QuadratureSpec::gauss());
  const Spectrum s = solve_gevp(op);
  const OutlierReport r = outlier_census(op, s);
  const int n = s.size();
  bool top_two = r.observed == 2 && r.entries.size() == 2;
  for (const auto& e : r.entries) top_two = top_two && e.flagged && e.position >= n - 1;
  o.require(top_two, "flagged " + std::to_string(r.observed) + " of predicted " + std::to_string(r.predicted));
  double worst = 0.0;
  for (const auto& e : r.entries) worst = std::max(worst, e.peak_to_median);
  o.require(!r.entries.empty() && worst <= 3.0, "max peak/median " + fmt("%.2f", worst));
  return o;
}

Outcome stopping_bands() {
  Outcome o;
  double residual = 0.0;
  auto run = [&](const BlockLayout& layout) {
    const DiscreteOperator op = assemble_1d(layout, QuadratureSpec::gauss());
    const DofPartition part = partition_dofs(op.knots, op.layout);
    const StoppingBandReport r = detect_stopping_bands(solve_gevp(op), local_bubble_spectra(op, part), op.layout);
    for (const StoppingBand& b : r.bands) {
      residual = std::max(residual, eigen_residual(op, reconstruct_stopping_mode(op, part, b.lambda_b), b.lambda_b));
    }
    return r;
  };
  const StoppingBandReport riga = run(riga_layout(100, 2, 10));
  const StoppingBandReport fea = run(fea_layout(100, 2));
  double worst_gap = 0.0;
  for (const auto& b : riga.bands) worst_gap = std::max(worst_gap, b.rel_gap);
  o.require(riga.band_count() == 10 && riga.matched_count == 10,
            "rIGA bands " + std::to_string(riga.band_count()) + ", matched " + std::to_string(riga.matched_count) +
                ", max gap " + fmt("%.1e", worst_gap));
  o.require(fea.band_count() == 1 && fea.matched_count == 1, "FEA bands " + std::to_string(fea.band_count()));
  o.require(residual < 1e-6, "max reconstruction residual " + fmt("%.1e", residual));
  return o;
}

Outcome dof_accounting() {
  Outcome o;
  std::mt19937 rng(20240611);
  std::uniform_int_distribution<int> deg(1, 5), ne(8, 160);
  int bad = 0;
  std::string worst;
  for (int k = 0; k < 12; ++k) {
    const int p = deg(rng), n = ne(rng);
    const int bs = std::uniform_int_distribution<int>(1, n)(rng);
    const int sep = (n - 1) / bs;
    const DiscreteOperator op = assemble_1d(riga_layout(n, p, bs), QuadratureSpec::gauss());
    const int got = solve_gevp(op, SolveMode::EigenvaluesOnly).size();
    const int want = n + p - 2 + (p - 1) * sep;
    if (got != want) {
      ++bad;
      worst = " (p=" + std::to_string(p) + " N_e=" + std::to_string(n) + " block=" + std::to_string(bs) + ": " +
              std::to_string(got) + " vs " + std::to_string(want) + ")";
    }
  }
  o.require(bad == 0, "12 configurations, mismatches " + std::to_string(bad) + worst);
  return o;
}

Outcome riga_vs_fea() {
  Outcome o;
  const DiscreteOperator riga = assemble_1d(riga_layout(1000, 2, 100), QuadratureSpec::gauss());
  const DiscreteOperator fea = assemble_1d(fea_layout(500, 2), QuadratureSpec::gauss());
  const auto er = refined_eigenvalue_errors(riga);
  const auto ef = refined_eigenvalue_errors(fea);
  const int n0 = riga.layout.reference_dofs();
  const int last = static_cast<int>(std::floor(0.9 * n0));
  int violations = 0, first_bad = 0;
  for (int j = 1; j <= last; ++j) {
    if (er[j - 1] > ef[j - 1]) {
      if (!violations) first_bad = j;
      ++violations;
    }
  }
  o.require(violations == 0, "modes 1.." + std::to_string(last) + " with rIGA error above FEA: " +
                                 std::to_string(violations) + (violations ? " (first j=" + std::to_string(first_bad) + ")" : ""));
  return o;
}

Outcome kronecker_oracle() {
  Outcome o;
  const BlockLayout layout = iga_layout(8, 2);
  const DiscreteOperator op1 = assemble_1d(layout, QuadratureSpec::gauss());
  const Spectrum t = solve_gevp(assemble_2d_tensor(op1));
  const Spectrum d = solve_gevp(assemble_2d_direct(op1.knots, layout, QuadratureSpec::gauss()));
  double dev = 0.0;
  for (int k = 0; k < t.size(); ++k) dev = std::max(dev, std::abs(t.eigenvalues[k] - d.eigenvalues[k]) / d.eigenvalues[k]);
  o.require(t.size() == d.size() && dev < 1e-9, "tensor vs direct " + fmt("%.1e", dev));

  const Spectrum s1 = solve_gevp(op1, SolveMode::EigenvaluesOnly);
  std::vector<double> sums;
  for (int a = 0; a < s1.size(); ++a) {
    for (int b = 0; b < s1.size(); ++b) sums.push_back(s1.eigenvalues[a] + s1.eigenvalues[b]);
  }
  std::sort(sums.begin(), sums.end());
  double dev2 = 0.0;
  for (int k = 0; k < t.size(); ++k) dev2 = std::max(dev2, std::abs(t.eigenvalues[k] - sums[k]) / sums[k]);
  o.require(static_cast<int>(sums.size()) == t.size() && dev2 < 1e-10, "pairwise sums " + fmt("%.1e", dev2));
  return o;
}

Outcome branch_structure() {
  Outcome o;
  for (int bs : {10, 100}) {
    const DiscreteOperator op = assemble_1d(riga_layout(1000, 2, bs), QuadratureSpec::gauss());
    BranchOptions opt;
    opt.unit_roundoff = unit_roundoff(Precision::Extended);
    const BranchReport r =
        count_branches(refined_eigenvalue_errors(op, Precision::Extended), op.layout.reference_dofs(), opt);
    o.require(r.branches == bs, "block " + std::to_string(bs) + ": " + std::to_string(r.branches) + " branches");
  }
  {
    const DiscreteOperator op = assemble_1d(riga_layout(1000, 2, 2), QuadratureSpec::gauss());
    const BranchReport r = count_branches(refined_eigenvalue_errors(op), op.layout.reference_dofs());
    o.require(r.branches == 2, "block 2: " + std::to_string(r.branches) + " branches");
  }
  {
    // FEA: the acoustic branch ends at j = N0 and the optical branch takes over.
    const DiscreteOperator op = assemble_1d(fea_layout(1000, 2), QuadratureSpec::gauss());
    const auto e = refined_eigenvalue_errors(op);
    const int n0 = op.layout.reference_dofs();
    const BranchReport r = count_branches(e, static_cast<int>(e.size()) + 1);
    const bool at_n0 = r.breaks.size() == 1 && std::abs(r.breaks[0] - n0) <= 1;
    o.require(r.branches == 2 && at_n0,
              "block 1: " + std::to_string(r.branches) + " branches over the full spectrum" +
                  (r.breaks.empty() ? "" : ", break at j=" + std::to_string(r.breaks[0])) + " (N0=" +
                  std::to_string(n0) + ")");
  }
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"pythagorean identity, exact quadrature", pythagoras},
      {"modified identity, blended quadrature", modified_identity},
      {"leading eigenvalue error coefficients", leading_coefficients},
      {"convergence slopes", slopes},
      {"outlier census", outlier_census_check},
      {"stopping bands", stopping_bands},
      {"DOF accounting", dof_accounting},
      {"rIGA below FEA", riga_vs_fea},
      {"2D Kronecker oracle", kronecker_oracle},
      {"branch structure", branch_structure},
  };
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    if (!o.pass) ++failed;
    std::printf("%s %zu %s: %s\n", o.pass ? "PASS" : "FAIL", k + 1, criteria[k].first, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed ? 1 : 0;
}
