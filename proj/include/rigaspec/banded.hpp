#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <span>
#include <vector>

namespace rigaspec {

/// Symmetric matrix stored by its main diagonal and `bandwidth` super-diagonals.
/// Entry (i, j) with |i - j| <= bandwidth lives at band_[|i-j| * n + min(i, j)].
class SymmetricBandedMatrix {
 public:
  SymmetricBandedMatrix() = default;
  SymmetricBandedMatrix(int dimension, int bandwidth);

  int dimension() const noexcept { return n_; }
  int bandwidth() const noexcept { return b_; }
  std::span<const double> band() const noexcept { return band_; }

  double operator()(int i, int j) const noexcept;
  void add(int i, int j, double v);

  /// y = A x.
  Eigen::VectorXd multiply(const Eigen::VectorXd& x) const;
  /// x^T A x.
  double quadratic_form(const Eigen::VectorXd& x) const;

  Eigen::MatrixXd to_dense() const;
  /// Dense principal submatrix A(rows, cols).
  Eigen::MatrixXd submatrix(std::span<const int> rows, std::span<const int> cols) const;

  /// Keep only rows/columns listed in `keep` (increasing).
  SymmetricBandedMatrix restrict_to(std::span<const int> keep) const;

  /// Largest |i - j| with a non-zero entry.
  int occupied_bandwidth() const noexcept;

  /// Banded Cholesky test; O(n b^2).
  bool is_positive_definite() const;

  /// One line `row col value` per stored (upper) band entry, 0-based.
  void write_dump(std::ostream& os) const;

 private:
  int n_ = 0;
  int b_ = 0;
  std::vector<double> band_;
};

}  // namespace rigaspec
