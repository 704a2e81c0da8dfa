#include "rigaspec/stopping_bands.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rigaspec/error.hpp"

namespace rigaspec {

std::vector<int> DofPartition::bubbles_of(int b) const {
  std::vector<int> out;
  for (std::size_t k = 0; k < bubble.size(); ++k) {
    if (bubble_block[k] == b) out.push_back(bubble[k]);
  }
  return out;
}

DofPartition partition_dofs(const KnotVector& kv, const BlockLayout& layout) {
  layout.validate();
  if (!(kv == make_block_knots(layout))) {
    throw Error(ErrorCode::InconsistentLayout, "knot vector does not match the block layout");
  }
  if (layout.separator_count() > 0 && layout.separator_continuity != 0) {
    throw Error(ErrorCode::UnsupportedContinuity,
                "bubble/interface partition needs C0 separators, got C" +
                    std::to_string(layout.separator_continuity));
  }
  if (layout.boundary != BoundaryCondition::Dirichlet) {
    throw Error(ErrorCode::InvalidArgument, "bubble/interface partition is defined for Dirichlet conditions");
  }
  const int p = kv.degree();
  const int n_full = kv.dimension();
  const double a = kv.front(), b = kv.back();

  std::vector<bool> is_interface(n_full, false);
  for (int e : layout.separator_elements()) {
    const double x = a + (b - a) * e / layout.elements;
    // First occurrence of the separator knot; the function ending its leading
    // knots there is the one interpolating at x.
    const auto it = std::lower_bound(kv.knots().begin(), kv.knots().end(), x - 1e-12 * (b - a));
    const int k = static_cast<int>(it - kv.knots().begin());
    is_interface[k - 1] = true;
  }

  DofPartition part;
  part.block_count = layout.block_count();
  for (int i = 1; i < n_full - 1; ++i) {
    const int free = i - 1;
    if (is_interface[i]) {
      part.interface.push_back(free);
      continue;
    }
    const double mid = 0.5 * (kv[i] + kv[i + p + 1]);
    const int span = kv.find_span(mid);
    const int element = static_cast<int>(std::floor((kv[span] - a) / (b - a) * layout.elements + 0.5));
    part.bubble.push_back(free);
    part.bubble_block.push_back(layout.block_of_element(std::clamp(element, 0, layout.elements - 1)));
  }
  return part;
}

std::vector<LocalBubbleSpectrum> local_bubble_spectra(const DiscreteOperator& op, const DofPartition& part) {
  std::vector<LocalBubbleSpectrum> out;
  for (int blk = 0; blk < part.block_count; ++blk) {
    LocalBubbleSpectrum local;
    local.block = blk;
    local.dofs = part.bubbles_of(blk);
    if (!local.dofs.empty()) {
      const Eigen::MatrixXd k = op.stiffness.submatrix(local.dofs, local.dofs);
      const Eigen::MatrixXd m = op.mass.submatrix(local.dofs, local.dofs);
      Spectrum s = solve_dense_gevp(k, m, SolveMode::WithVectors);
      local.eigenvalues = std::move(s.eigenvalues);
      local.eigenvectors = std::move(s.eigenvectors);
    }
    out.push_back(std::move(local));
  }
  return out;
}

namespace {

bool close_rel(double a, double b, double tol) { return std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b)); }

}  // namespace

StoppingBandReport detect_stopping_bands(const Spectrum& spectrum, const std::vector<LocalBubbleSpectrum>& local,
                                         const BlockLayout& layout) {
  StoppingBandReport report;
  report.expected_count = layout.block_size + layout.degree - 2;
  const int n = static_cast<int>(local.size());
  if (layout.separator_count() == 0 || n == 0) return report;
  for (int b = 0; b < n; ++b) {
    if (n <= 2 || (b > 0 && b < n - 1)) report.interior_blocks.push_back(b);
  }

  std::vector<double> values;
  for (int b : report.interior_blocks) {
    for (Eigen::Index k = 0; k < local[b].eigenvalues.size(); ++k) values.push_back(local[b].eigenvalues[k]);
  }
  std::sort(values.begin(), values.end());

  const Eigen::VectorXd& global = spectrum.eigenvalues;
  for (std::size_t k = 0; k < values.size();) {
    std::size_t end = k + 1;
    double sum = values[k];
    while (end < values.size() && close_rel(values[end], values[k], kBubbleClusterTolerance)) sum += values[end++];
    StoppingBand band;
    band.lambda_b = sum / static_cast<double>(end - k);
    band.multiplicity = static_cast<int>(end - k);
    if (global.size() > 0) {
      Eigen::Index best = 0;
      (global.array() - band.lambda_b).abs().minCoeff(&best);
      band.nearest_position = static_cast<int>(best) + 1;
      band.lambda_global = global[best];
      band.rel_gap = std::abs(band.lambda_global - band.lambda_b) / std::abs(band.lambda_b);
      band.matched = band.rel_gap < kBandMatchTolerance;
    }
    if (band.matched) ++report.matched_count;
    report.bands.push_back(band);
    k = end;
  }
  return report;
}

Eigen::VectorXd reconstruct_stopping_mode(const DiscreteOperator& op, const DofPartition& part, double lambda_b) {
  const std::vector<LocalBubbleSpectrum> local = local_bubble_spectra(op, part);
  const int nb = static_cast<int>(part.bubble.size());
  const int ni = static_cast<int>(part.interface.size());

  std::vector<int> bubble_pos(op.dimension(), -1);
  for (int k = 0; k < nb; ++k) bubble_pos[part.bubble[k]] = k;

  std::vector<Eigen::VectorXd> columns;
  for (const auto& blk : local) {
    for (Eigen::Index k = 0; k < blk.eigenvalues.size(); ++k) {
      if (!close_rel(blk.eigenvalues[k], lambda_b, kBubbleClusterTolerance)) continue;
      Eigen::VectorXd col = Eigen::VectorXd::Zero(nb);
      for (std::size_t r = 0; r < blk.dofs.size(); ++r) col[bubble_pos[blk.dofs[r]]] = blk.eigenvectors(r, k);
      columns.push_back(std::move(col));
    }
  }
  if (columns.empty()) {
    throw Error(ErrorCode::InvalidArgument, "value is not an eigenvalue of any local bubble problem");
  }
  Eigen::MatrixXd w(nb, static_cast<Eigen::Index>(columns.size()));
  for (std::size_t c = 0; c < columns.size(); ++c) w.col(static_cast<Eigen::Index>(c)) = columns[c];

  Eigen::VectorXd ub;
  Eigen::VectorXd ui = Eigen::VectorXd::Zero(ni);
  if (ni == 0) {
    ub = w.col(0);
  } else {
    const Eigen::MatrixXd s = op.stiffness.submatrix(part.interface, part.interface) -
                              lambda_b * op.mass.submatrix(part.interface, part.interface);
    const Eigen::MatrixXd bmat = op.stiffness.submatrix(part.interface, part.bubble) -
                                 lambda_b * op.mass.submatrix(part.interface, part.bubble);
    const Eigen::FullPivLU<Eigen::MatrixXd> lu(s);
    if (!lu.isInvertible() || lu.rcond() < 1e-14) {
      throw Error(ErrorCode::SingularInterfaceBlock, "K_ii - lambda M_ii is singular at this eigenvalue");
    }
    const Eigen::MatrixXd bw = bmat * w;
    const Eigen::MatrixXd g = bw.transpose() * lu.solve(bw);
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (g + g.transpose()));
    Eigen::Index best = 0;
    es.eigenvalues().cwiseAbs().minCoeff(&best);
    ub = w * es.eigenvectors().col(best);
    ui = -lu.solve(bmat * ub);
  }

  Eigen::VectorXd v = Eigen::VectorXd::Zero(op.dimension());
  for (int k = 0; k < nb; ++k) v[part.bubble[k]] = ub[k];
  for (int k = 0; k < ni; ++k) v[part.interface[k]] = ui[k];
  const double norm = std::sqrt(op.mass_exact.quadratic_form(v));
  if (!(norm > 0.0)) throw Error(ErrorCode::NoConvergence, "reconstructed mode vanished");
  v /= norm;
  Eigen::Index imax = 0;
  v.cwiseAbs().maxCoeff(&imax);
  if (v[imax] < 0.0) v = -v;
  return v;
}

double eigen_residual(const DiscreteOperator& op, const Eigen::VectorXd& v, double lambda) {
  const Eigen::VectorXd mv = op.mass.multiply(v);
  const Eigen::VectorXd r = op.stiffness.multiply(v) - lambda * mv;
  return r.norm() / (std::abs(lambda) * mv.norm());
}

}  // namespace rigaspec
