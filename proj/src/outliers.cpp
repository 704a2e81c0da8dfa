#include "rigaspec/outliers.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <string>
#include <unsupported/Eigen/FFT>

#include "rigaspec/budget.hpp"
#include "rigaspec/error.hpp"

namespace rigaspec {

int count_outliers_iga(int degree, BoundaryCondition bc) {
  if (degree < 2) throw Error(ErrorCode::InvalidDegree, "outlier count needs p >= 2, got " + std::to_string(degree));
  return bc == BoundaryCondition::Dirichlet ? 2 * ((degree - 1) / 2) : 2 * (degree / 2);
}

int count_outliers(int degree, int separators, BoundaryCondition bc) {
  if (separators < 0) throw Error(ErrorCode::InvalidArgument, "negative separator count");
  return count_outliers_iga(degree, bc) + (degree - 1) * separators;
}

std::vector<double> sample_function(const Eigen::VectorXd& v, const KnotVector& kv, BoundaryCondition bc,
                                    const std::vector<double>& x) {
  const int n = kv.dimension();
  const int offset = bc == BoundaryCondition::Dirichlet ? 1 : 0;
  if (v.size() != n - 2 * offset) {
    throw Error(ErrorCode::InvalidArgument, "coefficient column has " + std::to_string(v.size()) +
                                                " entries, expected " + std::to_string(n - 2 * offset));
  }
  std::vector<double> out(x.size());
  for (std::size_t m = 0; m < x.size(); ++m) {
    const int span = kv.find_span(x[m]);
    const LocalBasis lb = eval_local_basis(kv, span, x[m]);
    double s = 0.0;
    for (std::size_t a = 0; a < lb.values.size(); ++a) {
      const int i = lb.first + static_cast<int>(a) - offset;
      if (i >= 0 && i < v.size()) s += v[i] * lb.values[a];
    }
    out[m] = s;
  }
  return out;
}

int default_samples(int dofs) {
  int s = 1;
  while (s < 2 * dofs) s *= 2;
  return s;
}

namespace {

double median_of(std::vector<double> values) {
  if (values.empty()) return 0.0;
  const std::size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + mid, values.end());
  double m = values[mid];
  if (values.size() % 2 == 0) m = 0.5 * (m + *std::max_element(values.begin(), values.begin() + mid));
  return m;
}

std::vector<double> uniform_points(int samples) {
  std::vector<double> x(samples + 1);
  for (int m = 0; m <= samples; ++m) x[m] = static_cast<double>(m) / samples;
  return x;
}

void check_samples(int samples, int dofs) {
  const bool pow2 = samples > 0 && (samples & (samples - 1)) == 0;
  if (!pow2 || samples < 2 * dofs) {
    throw Error(ErrorCode::Undersampling, std::to_string(samples) + " samples for " + std::to_string(dofs) +
                                              " DOFs; need a power of two >= " + std::to_string(2 * dofs));
  }
}

}  // namespace

FrequencyContent frequency_content(const Eigen::VectorXd& v, const KnotVector& kv, int samples,
                                   BoundaryCondition bc) {
  check_samples(samples, static_cast<int>(v.size()));
  const std::vector<double> u = sample_function(v, kv, bc, uniform_points(samples));

  // Period-2 extension: g(2 - x) = -u(x) (odd) or u(x) (even).
  const double sign = bc == BoundaryCondition::Dirichlet ? -1.0 : 1.0;
  std::vector<double> g(2 * samples);
  for (int m = 0; m <= samples; ++m) g[m] = u[m];
  for (int m = samples + 1; m < 2 * samples; ++m) g[m] = sign * u[2 * samples - m];
  if (bc == BoundaryCondition::Dirichlet) g[0] = g[samples] = 0.0;

  Eigen::FFT<double> fft;
  std::vector<std::complex<double>> spec;
  fft.fwd(spec, g);

  FrequencyContent fc;
  fc.magnitude.resize(samples + 1);
  for (int k = 0; k <= samples; ++k) fc.magnitude[k] = std::abs(spec[k]) / samples;

  const auto& mag = fc.magnitude;
  for (int k = 0; k <= samples; ++k) {
    const double left = k > 0 ? mag[k - 1] : -1.0;
    const double right = k < samples ? mag[k + 1] : -1.0;
    if (mag[k] > left && mag[k] >= right && mag[k] > 0.0) fc.peaks.push_back(k);
  }
  std::stable_sort(fc.peaks.begin(), fc.peaks.end(), [&](int a, int b) { return mag[a] > mag[b]; });
  fc.median = median_of(std::vector<double>(mag.begin() + 1, mag.end()));
  if (!fc.peaks.empty() && fc.median > 0.0) fc.peak_to_median = mag[fc.peaks.front()] / fc.median;
  return fc;
}

AmFit am_fit(const Eigen::VectorXd& v, const KnotVector& kv, int dofs, int elements, BoundaryCondition bc,
             int samples) {
  if (samples == 0) samples = default_samples(static_cast<int>(v.size()));
  const FrequencyContent fc = frequency_content(v, kv, samples, bc);
  AmFit fit;
  if (fc.peaks.empty()) return fit;
  const int b1 = fc.peaks[0];
  fit.f1 = FrequencyContent::frequency(b1);
  fit.two_peaks = fc.peaks.size() > 1 && fc.magnitude[fc.peaks[1]] >= kSecondPeakFraction * fc.magnitude[b1];
  const int b2 = fit.two_peaks ? fc.peaks[1] : -1;
  if (fit.two_peaks) {
    fit.f2 = FrequencyContent::frequency(b2);
    fit.defect_dofs = std::abs(fit.f2 - (dofs - fit.f1));
    fit.defect_elements = std::abs(fit.f2 - (elements - fit.f1));
  } else {
    fit.f2 = std::numeric_limits<double>::quiet_NaN();
    fit.defect_dofs = fit.defect_elements = std::numeric_limits<double>::quiet_NaN();
  }

  // Even degree pairs sines under Dirichlet; odd degree, or Neumann, flips to cosines (both flips cancel).
  const bool odd = kv.degree() % 2 == 1;
  const bool use_sine = odd == (bc == BoundaryCondition::Neumann);
  const double sign2 = odd ? 1.0 : -1.0;
  const std::vector<double> x = uniform_points(samples);
  const std::vector<double> u = sample_function(v, kv, bc, x);
  const int cols = fit.two_peaks ? 2 : 1;
  Eigen::MatrixXd a(x.size(), cols);
  Eigen::VectorXd rhs(x.size());
  auto tone = [&](double f, double t) {
    const double arg = 2.0 * std::numbers::pi * f * t;
    return use_sine ? std::sin(arg) : std::cos(arg);
  };
  for (std::size_t m = 0; m < x.size(); ++m) {
    a(m, 0) = tone(fit.f1, x[m]);
    if (cols == 2) a(m, 1) = sign2 * tone(fit.f2, x[m]);
    rhs[m] = u[m];
  }
  const Eigen::VectorXd c = a.colPivHouseholderQr().solve(rhs);
  fit.a1 = c[0];
  fit.a2 = cols == 2 ? c[1] : 0.0;
  const double norm = rhs.norm();
  fit.misfit = norm > 0.0 ? (a * c - rhs).norm() / norm : 0.0;

  // Phase-free variant: separates a wrong frequency pair from a wrong phase.
  Eigen::MatrixXd b(x.size(), 2 * cols);
  for (std::size_t m = 0; m < x.size(); ++m) {
    for (int t = 0; t < cols; ++t) {
      const double arg = 2.0 * std::numbers::pi * (t == 0 ? fit.f1 : fit.f2) * x[m];
      b(m, 2 * t) = std::sin(arg);
      b(m, 2 * t + 1) = std::cos(arg);
    }
  }
  const Eigen::VectorXd d = b.colPivHouseholderQr().solve(rhs);
  fit.misfit_any_phase = norm > 0.0 ? (b * d - rhs).norm() / norm : 0.0;
  return fit;
}

FlaggedRun flag_top_outliers(const std::vector<double>& ev_rel, double factor) {
  FlaggedRun run;
  const int n = static_cast<int>(ev_rel.size());
  if (n == 0) return run;
  const int decile = std::max(1, (n + 9) / 10);
  std::vector<double> top;
  for (int k = n - decile; k < n; ++k) {
    if (std::isfinite(ev_rel[k])) top.push_back(ev_rel[k]);
  }
  run.median = median_of(top);
  for (int k = n - 1; k >= 0; --k) {
    if (!(std::isfinite(ev_rel[k]) && ev_rel[k] >= factor * run.median)) break;
    run.positions.push_back(k + 1);
  }
  std::reverse(run.positions.begin(), run.positions.end());
  return run;
}

bool OutlierReport::predicted_all_flagged() const noexcept {
  int flagged_top = 0;
  for (auto it = entries.rbegin(); it != entries.rend() && it->flagged; ++it) ++flagged_top;
  return flagged_top >= predicted;
}

OutlierReport outlier_census(const DiscreteOperator& op, const Spectrum& spectrum, int samples) {
  if (!spectrum.has_vectors()) throw Error(ErrorCode::InvalidArgument, "outlier census needs eigenvectors");
  const BlockLayout& layout = op.layout;
  const BoundaryCondition bc = layout.boundary;
  const int n = spectrum.size();
  const int shift = bc == BoundaryCondition::Neumann ? 1 : 0;

  std::vector<double> ev_rel(n);
  for (int k = 0; k < n; ++k) {
    const double exact = exact_spectrum_1d(k + 1 - shift, bc).eigenvalue;
    ev_rel[k] = exact > 0.0 ? (spectrum.eigenvalues[k] - exact) / exact : std::numeric_limits<double>::quiet_NaN();
  }

  OutlierReport report;
  const int separators = layout.separator_continuity == 0 ? layout.separator_count() : 0;
  report.predicted_iga = count_outliers_iga(layout.degree, bc);
  report.predicted = count_outliers(layout.degree, separators, bc);
  const FlaggedRun run = flag_top_outliers(ev_rel);
  report.observed = static_cast<int>(run.positions.size());
  report.decile_median = run.median;

  if (samples == 0) samples = default_samples(n);
  const int count = std::min(n, std::max(report.predicted, report.observed));
  for (int k = n - count; k < n; ++k) {
    OutlierEntry e;
    e.position = k + 1;
    e.ev_rel = ev_rel[k];
    e.ratio = run.median > 0.0 ? ev_rel[k] / run.median : std::numeric_limits<double>::quiet_NaN();
    e.flagged = k + 1 >= n - report.observed + 1;
    const Eigen::VectorXd v = spectrum.eigenvectors.col(k);
    const FrequencyContent fc = frequency_content(v, op.knots, samples, bc);
    e.dominant_bin = fc.dominant_bin();
    e.peak_to_median = fc.peak_to_median;
    e.fit = am_fit(v, op.knots, n, layout.elements, bc, samples);
    report.entries.push_back(e);
  }
  return report;
}

}  // namespace rigaspec
