#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "rigaspec/assembly.hpp"

namespace rigaspec {

enum class Normalization { AssembledMass, ExactMass };

/// All eigenpairs of K u = lambda M u, eigenvalues ascending.
///
/// Column j of `eigenvectors` holds the B-spline coefficients of mode j + 1,
/// scaled so that v^T M v = 1 for the matrix named by `normalization`, with its
/// largest-magnitude entry positive. Empty when only eigenvalues were requested.
struct Spectrum {
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd eigenvectors;
  Normalization normalization = Normalization::AssembledMass;

  int size() const noexcept { return static_cast<int>(eigenvalues.size()); }
  bool has_vectors() const noexcept { return eigenvectors.cols() > 0; }
};

enum class SolveMode { EigenvaluesOnly, WithVectors };

/// Dense symmetric-definite solve: Cholesky of M, eigendecomposition of
/// L^{-1} K L^{-T}, back-substitution.
Spectrum solve_dense_gevp(const Eigen::MatrixXd& stiffness, const Eigen::MatrixXd& mass,
                          SolveMode mode = SolveMode::WithVectors);

/// Full spectrum of a 1D operator, normalized against its assembled mass matrix.
Spectrum solve_gevp(const DiscreteOperator& op, SolveMode mode = SolveMode::WithVectors);

/// Full spectrum of a 2D operator (dense; intended for the desk-scale sizes).
Spectrum solve_gevp(const DiscreteOperator2D& op, SolveMode mode = SolveMode::EigenvaluesOnly);

/// Independent check by shifted inverse iteration.
struct OracleReport {
  struct Entry {
    int mode = 0;              // 1-based
    double eigenvalue = 0.0;   // from the spectrum
    double oracle = 0.0;       // Rayleigh quotient of the converged iterate
    double deviation = 0.0;    // |oracle - eigenvalue| / |eigenvalue|
    int iterations = 0;
    bool converged = false;
  };
  std::vector<Entry> entries;
  double max_deviation = 0.0;
  std::vector<int> suspect_modes;  // diverged or deviating beyond tolerance

  bool ok() const noexcept { return suspect_modes.empty(); }
};

inline constexpr double kOracleTolerance = 1e-9;

OracleReport oracle_check(const SparseMatrix& stiffness, const SparseMatrix& mass, const Spectrum& spectrum,
                          const std::vector<int>& modes, std::uint64_t seed = 12345);
OracleReport oracle_check(const DiscreteOperator& op, const Spectrum& spectrum, const std::vector<int>& modes,
                          std::uint64_t seed = 12345);

}  // namespace rigaspec
