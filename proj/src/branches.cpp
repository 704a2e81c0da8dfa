#include "rigaspec/branches.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "rigaspec/error.hpp"

namespace rigaspec {

namespace {

Eigen::VectorXd fit_cubic(const Eigen::MatrixXd& a, const Eigen::VectorXd& b) {
  return a.colPivHouseholderQr().solve(b);
}

}  // namespace

BranchReport count_branches(const std::vector<double>& ev_rel, int n0, const BranchOptions& options) {
  if (n0 < 2) throw Error(ErrorCode::InvalidArgument, "reference dimension must be at least 2");
  if (options.window < 3 || options.trim < 0 || options.trim > 2 * options.window - 7) {
    throw Error(ErrorCode::InvalidArgument, "branch window too small for the trimmed cubic fit");
  }
  BranchReport report;
  int first = 1;
  while (first <= static_cast<int>(ev_rel.size()) && !std::isfinite(ev_rel[first - 1])) ++first;
  const int last = std::min<int>(static_cast<int>(ev_rel.size()), n0 - 1);
  report.first_position = first;
  report.last_position = last;
  if (last - first + 1 < 3) return report;

  const int count = last - first + 1;
  for (int k = first; k <= last; ++k) {
    if (!std::isfinite(ev_rel[k - 1])) {
      throw Error(ErrorCode::InvalidArgument, "non-finite eigenvalue error at position " + std::to_string(k));
    }
  }
  auto e = [&](int pos) { return ev_rel[pos - 1]; };
  // d[i] is centred at position first + 1 + i.
  std::vector<double> d(count - 2);
  for (int i = 0; i < count - 2; ++i) {
    const int pos = first + 1 + i;
    d[i] = e(pos + 1) - 2.0 * e(pos) + e(pos - 1);
  }

  const int w = options.window;
  const int npts = 2 * w - 2;
  const int nd = static_cast<int>(d.size());
  report.anomaly.assign(count, std::numeric_limits<double>::quiet_NaN());

  std::vector<int> candidates;
  Eigen::MatrixXd a(npts, 4);
  Eigen::VectorXd b(npts);
  std::vector<int> order(npts);
  for (int i = w; i + w < nd; ++i) {
    int row = 0;
    for (int k = i - w; k <= i + w; ++k) {
      if (std::abs(k - i) <= 1) continue;
      const double t = k - i;
      a.row(row) << 1.0, t, t * t, t * t * t;
      b[row] = d[k];
      ++row;
    }
    Eigen::VectorXd c = fit_cubic(a, b);
    if (options.trim > 0) {
      const Eigen::VectorXd res = (a * c - b).cwiseAbs();
      std::iota(order.begin(), order.end(), 0);
      std::stable_sort(order.begin(), order.end(), [&](int x, int y) { return res[x] < res[y]; });
      const int keep = npts - options.trim;
      Eigen::MatrixXd ak(keep, 4);
      Eigen::VectorXd bk(keep);
      for (int r = 0; r < keep; ++r) {
        ak.row(r) = a.row(order[r]);
        bk[r] = b[order[r]];
      }
      c = fit_cubic(ak, bk);
    }
    const int pos = first + 1 + i;
    const double scale = std::abs(e(pos));
    if (scale == 0.0) continue;
    const double anomaly = (d[i] - c[0]) / scale;
    report.anomaly[pos - first] = anomaly;
    const double floor = std::max(options.relative_floor, options.noise_factor * options.unit_roundoff / scale);
    if (anomaly < -floor) candidates.push_back(pos);
  }

  auto strength = [&](int pos) { return -report.anomaly[pos - first]; };
  std::stable_sort(candidates.begin(), candidates.end(), [&](int x, int y) { return strength(x) > strength(y); });
  for (int pos : candidates) {
    bool keep = true;
    for (int other : report.breaks) {
      const int dist = std::abs(pos - other);
      if (dist <= w || (dist <= 3 * w && strength(pos) <= options.dominance * strength(other))) {
        keep = false;
        break;
      }
    }
    if (keep) report.breaks.push_back(pos);
  }
  std::sort(report.breaks.begin(), report.breaks.end());
  report.branches = static_cast<int>(report.breaks.size()) + 1;
  return report;
}

}  // namespace rigaspec
