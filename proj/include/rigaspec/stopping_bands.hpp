#pragma once

#include <Eigen/Dense>
#include <vector>

#include "rigaspec/assembly.hpp"
#include "rigaspec/eigensolve.hpp"

namespace rigaspec {

/// Split of the free DOFs of a C^0-separated layout. Indices are positions
/// among the free DOFs (the numbering of DiscreteOperator matrices).
struct DofPartition {
  std::vector<int> bubble;        // vanish at every separator, ascending
  std::vector<int> interface;     // one per separator, ascending
  std::vector<int> bubble_block;  // block of each bubble
  int block_count = 0;

  /// Bubble DOFs of block `b`.
  std::vector<int> bubbles_of(int b) const;
};

/// Interface = the function equal to 1 at each separator knot, bubbles = the
/// rest. Requires C^0 separators (when there are any) and Dirichlet conditions.
DofPartition partition_dofs(const KnotVector& kv, const BlockLayout& layout);

/// Local bubble problems: eigenvalues of (K_bb^L, M_bb^L) per block, ascending,
/// from the operator's assembled matrices.
struct LocalBubbleSpectrum {
  int block = 0;
  std::vector<int> dofs;
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd eigenvectors;  // columns over `dofs`
};
std::vector<LocalBubbleSpectrum> local_bubble_spectra(const DiscreteOperator& op, const DofPartition& part);

inline constexpr double kBubbleClusterTolerance = 1e-8;
inline constexpr double kBandMatchTolerance = 1e-6;

struct StoppingBand {
  double lambda_b = 0.0;
  int multiplicity = 0;       // interior blocks carrying this eigenvalue
  int nearest_position = 0;   // 1-based position of the nearest global eigenvalue
  double lambda_global = 0.0;
  double rel_gap = 0.0;
  bool matched = false;
};

struct StoppingBandReport {
  std::vector<int> interior_blocks;
  std::vector<StoppingBand> bands;  // one per distinct interior bubble eigenvalue, ascending
  int expected_count = 0;           // block_size + p - 2
  int matched_count = 0;

  int band_count() const noexcept { return static_cast<int>(bands.size()); }
};

/// Blocks 1..n-2 are interior when there are at least three; with one or two
/// blocks every block counts. Distinct eigenvalues are merged at relative
/// distance kBubbleClusterTolerance; a band is matched when the nearest global
/// eigenvalue is within kBandMatchTolerance (relative).
StoppingBandReport detect_stopping_bands(const Spectrum& spectrum, const std::vector<LocalBubbleSpectrum>& local,
                                         const BlockLayout& layout);

/// Global mode at a bubble eigenvalue built from the local bubble
/// eigenfunctions of every block that carries lambda_b, combined through the
/// reduced interface system and normalized in the exact mass matrix.
Eigen::VectorXd reconstruct_stopping_mode(const DiscreteOperator& op, const DofPartition& part, double lambda_b);

/// ||K v - lambda M v|| / (lambda ||M v||) with the assembled matrices.
double eigen_residual(const DiscreteOperator& op, const Eigen::VectorXd& v, double lambda);

}  // namespace rigaspec
