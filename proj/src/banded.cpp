#include "rigaspec/banded.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "rigaspec/error.hpp"

namespace rigaspec {

SymmetricBandedMatrix::SymmetricBandedMatrix(int dimension, int bandwidth)
    : n_(dimension), b_(bandwidth), band_(static_cast<std::size_t>(bandwidth + 1) * dimension, 0.0) {
  if (dimension < 0 || bandwidth < 0) throw Error(ErrorCode::InvalidArgument, "negative matrix shape");
}

double SymmetricBandedMatrix::operator()(int i, int j) const noexcept {
  const int d = std::abs(i - j);
  if (d > b_) return 0.0;
  return band_[static_cast<std::size_t>(d) * n_ + std::min(i, j)];
}

void SymmetricBandedMatrix::add(int i, int j, double v) {
  const int d = std::abs(i - j);
  if (d > b_ || i < 0 || j < 0 || i >= n_ || j >= n_) {
    throw Error(ErrorCode::IndexOutOfRange, "entry outside the band");
  }
  band_[static_cast<std::size_t>(d) * n_ + std::min(i, j)] += v;
}

Eigen::VectorXd SymmetricBandedMatrix::multiply(const Eigen::VectorXd& x) const {
  Eigen::VectorXd y = Eigen::VectorXd::Zero(n_);
  for (int d = 0; d <= b_; ++d) {
    const double* diag = band_.data() + static_cast<std::size_t>(d) * n_;
    for (int i = 0; i + d < n_; ++i) {
      y[i] += diag[i] * x[i + d];
      if (d > 0) y[i + d] += diag[i] * x[i];
    }
  }
  return y;
}

double SymmetricBandedMatrix::quadratic_form(const Eigen::VectorXd& x) const {
  return x.dot(multiply(x));
}

Eigen::MatrixXd SymmetricBandedMatrix::to_dense() const {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n_, n_);
  for (int d = 0; d <= b_; ++d) {
    for (int i = 0; i + d < n_; ++i) {
      const double v = band_[static_cast<std::size_t>(d) * n_ + i];
      a(i, i + d) = v;
      a(i + d, i) = v;
    }
  }
  return a;
}

Eigen::MatrixXd SymmetricBandedMatrix::submatrix(std::span<const int> rows, std::span<const int> cols) const {
  Eigen::MatrixXd a(rows.size(), cols.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < cols.size(); ++c) a(r, c) = (*this)(rows[r], cols[c]);
  }
  return a;
}

SymmetricBandedMatrix SymmetricBandedMatrix::restrict_to(std::span<const int> keep) const {
  const int m = static_cast<int>(keep.size());
  SymmetricBandedMatrix out(m, b_);
  for (int r = 0; r < m; ++r) {
    for (int c = r; c < m && keep[c] - keep[r] <= b_; ++c) {
      const double v = (*this)(keep[r], keep[c]);
      if (c - r <= b_) out.add(r, c, v);
    }
  }
  return out;
}

int SymmetricBandedMatrix::occupied_bandwidth() const noexcept {
  for (int d = b_; d > 0; --d) {
    const double* diag = band_.data() + static_cast<std::size_t>(d) * n_;
    for (int i = 0; i + d < n_; ++i) {
      if (diag[i] != 0.0) return d;
    }
  }
  return 0;
}

bool SymmetricBandedMatrix::is_positive_definite() const {
  // Column-oriented band Cholesky on a dense (b+1) x n working copy.
  std::vector<double> l(band_);
  auto at = [&](int i, int j) -> double& {  // i >= j, i - j <= b
    return l[static_cast<std::size_t>(i - j) * n_ + j];
  };
  for (int j = 0; j < n_; ++j) {
    double djj = at(j, j);
    for (int k = std::max(0, j - b_); k < j; ++k) djj -= at(j, k) * at(j, k);
    if (!(djj > 0.0) || !std::isfinite(djj)) return false;
    const double ljj = std::sqrt(djj);
    at(j, j) = ljj;
    for (int i = j + 1; i <= std::min(n_ - 1, j + b_); ++i) {
      double s = at(i, j);
      for (int k = std::max(0, i - b_); k < j; ++k) s -= at(i, k) * at(j, k);
      at(i, j) = s / ljj;
    }
  }
  return true;
}

void SymmetricBandedMatrix::write_dump(std::ostream& os) const {
  char buf[64];
  for (int i = 0; i < n_; ++i) {
    for (int d = 0; d <= b_ && i + d < n_; ++d) {
      std::snprintf(buf, sizeof buf, "%.17g", band_[static_cast<std::size_t>(d) * n_ + i]);
      os << i << ' ' << (i + d) << ' ' << buf << '\n';
    }
  }
}

}  // namespace rigaspec
