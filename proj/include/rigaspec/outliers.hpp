#pragma once

#include <Eigen/Dense>
#include <vector>

#include "rigaspec/assembly.hpp"
#include "rigaspec/eigensolve.hpp"
#include "rigaspec/splines.hpp"

namespace rigaspec {

/// Expected number of outliers: 2 floor((p-1)/2) (Dirichlet) or 2 floor(p/2)
/// (Neumann) for the smooth part, plus p - 1 per C^0 separator.
int count_outliers_iga(int degree, BoundaryCondition bc = BoundaryCondition::Dirichlet);
int count_outliers(int degree, int separators, BoundaryCondition bc = BoundaryCondition::Dirichlet);

/// Values of sum_i v_i N_i at the given points; v lives on the free DOFs of
/// `bc` (Dirichlet drops the two end functions).
std::vector<double> sample_function(const Eigen::VectorXd& v, const KnotVector& kv, BoundaryCondition bc,
                                    const std::vector<double>& x);

/// Magnitude spectrum of a mode on [0, 1].
///
/// The function is extended to period 2 (odd for Dirichlet, even for Neumann)
/// and sampled at 2S points, so bin k holds frequency k / 2 cycles per unit
/// length. Magnitudes are |G_k| / S, which puts sqrt(2) at bin j for the exact
/// mode sqrt(2) sin(j pi x).
struct FrequencyContent {
  std::vector<double> magnitude;  // bins 0..S
  std::vector<int> peaks;         // local maxima, strongest first
  double median = 0.0;            // median magnitude over bins 1..S
  double peak_to_median = 0.0;    // strongest peak / median

  static double frequency(int bin) noexcept { return 0.5 * bin; }
  int dominant_bin() const noexcept { return peaks.empty() ? 0 : peaks.front(); }
};

/// `samples` (S) must be a power of two and at least twice the DOF count.
FrequencyContent frequency_content(const Eigen::VectorXd& v, const KnotVector& kv, int samples,
                                   BoundaryCondition bc = BoundaryCondition::Dirichlet);

/// Smallest admissible sample count for n DOFs.
int default_samples(int dofs);

/// Two-tone model of a high-frequency mode. Even degree:
///   A1 sin(2 pi f1 x) - A2 sin(2 pi f2 x),
/// odd degree:
///   A1 cos(2 pi f1 x) + A2 cos(2 pi f2 x),
/// with sine and cosine exchanged for Neumann conditions. f1, f2 come from
/// the two strongest spectral peaks; A1, A2 from a least-squares fit.
struct AmFit {
  double a1 = 0.0;
  double f1 = 0.0;
  double a2 = 0.0;
  double f2 = 0.0;
  bool two_peaks = false;       // false: second peak absent or below 1% of the first, a2 = 0
  double defect_dofs = 0.0;     // |f2 - (n - f1)|, n = DOF count (cycles)
  double defect_elements = 0.0; // |f2 - (N_e - f1)| (cycles)
  double misfit = 0.0;          // relative L2 misfit of the model at the samples
  double misfit_any_phase = 0.0; // same two frequencies, sine and cosine each
};

inline constexpr double kSecondPeakFraction = 0.01;

AmFit am_fit(const Eigen::VectorXd& v, const KnotVector& kv, int dofs, int elements,
             BoundaryCondition bc = BoundaryCondition::Dirichlet, int samples = 0);

/// Threshold convention: a high mode is an outlier when its ev_rel is at least
/// kOutlierFactor times the median ev_rel of the top tenth of the spectrum.
inline constexpr double kOutlierFactor = 10.0;

struct OutlierEntry {
  int position = 0;  // 1-based
  double ev_rel = 0.0;
  double ratio = 0.0;  // ev_rel / top-decile median
  bool flagged = false;
  int dominant_bin = 0;
  double peak_to_median = 0.0;
  AmFit fit;
};

struct OutlierReport {
  int predicted = 0;
  int predicted_iga = 0;
  int observed = 0;            // flagged run ending at the top of the spectrum
  double decile_median = 0.0;
  std::vector<OutlierEntry> entries;  // the max(predicted, observed) highest modes, ascending
  bool predicted_all_flagged() const noexcept;
};

/// Census over a full spectrum with eigenvectors (position k pairs with exact
/// mode k for Dirichlet).
OutlierReport outlier_census(const DiscreteOperator& op, const Spectrum& spectrum, int samples = 0);

/// Positions (1-based, ascending) of the flagged run at the top of ev_rel and
/// the median used.
struct FlaggedRun {
  std::vector<int> positions;
  double median = 0.0;
};
FlaggedRun flag_top_outliers(const std::vector<double>& ev_rel, double factor = kOutlierFactor);

}  // namespace rigaspec
