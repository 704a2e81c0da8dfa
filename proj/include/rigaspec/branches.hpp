#pragma once

#include <vector>

namespace rigaspec {

/// Break detection on an eigenvalue-error curve e_j, j = 1..n.
///
/// A branch ends where the curve has a localized kink or spike. For every
/// centre j with a complete window, the second difference d_j = e_{j+1} - 2 e_j
/// + e_{j-1} is compared with a cubic fitted to d over j - window..j + window
/// (the centre and its two neighbours left out, the `trim` worst points
/// dropped and the fit repeated). The anomaly a_j = (d_j - fit_j) / |e_j| marks
/// a break candidate when
///   a_j < -max(relative_floor, noise_factor * unit_roundoff / |e_j|).
/// Candidates are accepted strongest first; one is discarded if it lies within
/// `window` of an accepted break, or within 3 * window of one and weaker than
/// `dominance` times it.
struct BranchOptions {
  int window = 7;
  int trim = 3;
  double relative_floor = 1e-6;
  double noise_factor = 2000.0;
  double unit_roundoff = 1.1102230246251565e-16;
  double dominance = 0.02;
};

struct BranchReport {
  int first_position = 1;       // first position analysed (1-based)
  int last_position = 0;        // last position analysed
  std::vector<int> breaks;      // positions where a branch ends, ascending
  std::vector<double> anomaly;  // a_j per analysed position, NaN without a full window
  int branches = 0;             // breaks + 1 (0 when nothing was analysed)
};

/// Counts branches of ev_rel over positions with 0 < position / n0 < 1.
/// ev_rel[k] belongs to position k + 1; non-finite leading entries (the
/// Neumann constant mode) are skipped.
BranchReport count_branches(const std::vector<double>& ev_rel, int n0, const BranchOptions& options = {});

}  // namespace rigaspec
