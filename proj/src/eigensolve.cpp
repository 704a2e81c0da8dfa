#include "rigaspec/eigensolve.hpp"

#include <Eigen/SparseLU>
#include <cmath>
#include <random>

#include "rigaspec/error.hpp"

namespace rigaspec {

Spectrum solve_dense_gevp(const Eigen::MatrixXd& stiffness, const Eigen::MatrixXd& mass, SolveMode mode) {
  if (stiffness.rows() != stiffness.cols() || mass.rows() != mass.cols() || stiffness.rows() != mass.rows()) {
    throw Error(ErrorCode::InvalidArgument, "stiffness and mass must be square and of equal size");
  }
  const Eigen::LLT<Eigen::MatrixXd> llt(mass);
  if (llt.info() != Eigen::Success) throw Error(ErrorCode::IndefiniteMass, "mass matrix is not positive definite");
  const auto lower = llt.matrixL();

  Eigen::MatrixXd c = lower.solve(stiffness);
  c = lower.solve(c.transpose()).eval();
  c = (0.5 * (c + c.transpose())).eval();

  const bool vectors = mode == SolveMode::WithVectors;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(c, vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw Error(ErrorCode::NoConvergence, "symmetric eigensolver did not converge");

  Spectrum s;
  s.eigenvalues = es.eigenvalues();
  if (vectors) {
    s.eigenvectors = llt.matrixU().solve(es.eigenvectors());
    for (Eigen::Index j = 0; j < s.eigenvectors.cols(); ++j) {
      Eigen::Index imax = 0;
      s.eigenvectors.col(j).cwiseAbs().maxCoeff(&imax);
      if (s.eigenvectors(imax, j) < 0.0) s.eigenvectors.col(j) *= -1.0;
    }
  }
  return s;
}

Spectrum solve_gevp(const DiscreteOperator& op, SolveMode mode) {
  Spectrum s = solve_dense_gevp(op.stiffness.to_dense(), op.mass.to_dense(), mode);
  s.normalization = Normalization::AssembledMass;
  return s;
}

Spectrum solve_gevp(const DiscreteOperator2D& op, SolveMode mode) {
  Spectrum s = solve_dense_gevp(Eigen::MatrixXd(op.stiffness), Eigen::MatrixXd(op.mass), mode);
  s.normalization = Normalization::AssembledMass;
  return s;
}

OracleReport oracle_check(const SparseMatrix& stiffness, const SparseMatrix& mass, const Spectrum& spectrum,
                          const std::vector<int>& modes, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  const Eigen::Index n = stiffness.rows();
  OracleReport report;
  for (int mode : modes) {
    if (mode < 1 || mode > spectrum.size()) throw Error(ErrorCode::ModeRange, "oracle mode outside the spectrum");
    const double lambda = spectrum.eigenvalues[mode - 1];
    const double shift = lambda == 0.0 ? 1e-6 : lambda * (1.0 + 1e-6);

    SparseMatrix shifted = stiffness - shift * mass;
    shifted.makeCompressed();
    Eigen::SparseLU<SparseMatrix> lu;
    lu.compute(shifted);

    OracleReport::Entry e;
    e.mode = mode;
    e.eigenvalue = lambda;
    if (lu.info() != Eigen::Success) {
      // Exactly singular shift: the shift itself is an eigenvalue.
      e.oracle = shift;
      e.converged = true;
    } else {
      Eigen::VectorXd x(n);
      for (Eigen::Index i = 0; i < n; ++i) x[i] = normal(rng);
      double rho = 0.0;
      for (int it = 1; it <= 60; ++it) {
        Eigen::VectorXd y = lu.solve(mass * x);
        const double norm = std::sqrt(y.dot(mass * y));
        x = y / norm;
        const Eigen::VectorXd kx = stiffness * x;
        const Eigen::VectorXd mx = mass * x;
        const double next = x.dot(kx) / x.dot(mx);
        e.iterations = it;
        const double residual = (kx - next * mx).norm() / (std::abs(next) * mx.norm() + 1e-300);
        const bool settled = it > 1 && std::abs(next - rho) <= 1e-14 * std::abs(next);
        rho = next;
        if (settled || residual < 1e-12) {
          e.converged = true;
          break;
        }
      }
      e.oracle = rho;
    }
    e.deviation = std::abs(e.oracle - lambda) / std::max(std::abs(lambda), 1e-300);
    if (!e.converged || e.deviation > kOracleTolerance) report.suspect_modes.push_back(mode);
    report.max_deviation = std::max(report.max_deviation, e.deviation);
    report.entries.push_back(e);
  }
  return report;
}

OracleReport oracle_check(const DiscreteOperator& op, const Spectrum& spectrum, const std::vector<int>& modes,
                          std::uint64_t seed) {
  return oracle_check(to_sparse(op.stiffness), to_sparse(op.mass), spectrum, modes, seed);
}

}  // namespace rigaspec
