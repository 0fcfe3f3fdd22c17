#pragma once

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <limits>

#include "qgfilter/numerics.hpp"

namespace qgfilter {

using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

/// Outcome of a rank-truncated least-squares solve of a square or tall system.
struct TruncatedSolve {
  CVector x;
  Eigen::Index rank = 0;
  double sigma_max = 0.0;
  double sigma_min = 0.0;
  double residual = 0.0;
  double rhs_norm = 0.0;
  bool full_rank = false;
  bool consistent = false;
  /// Columns span the numerical null space (empty when full rank).
  CMatrix null_space;

  [[nodiscard]] double condition_estimate() const {
    return sigma_min > 0.0 ? sigma_max / sigma_min : std::numeric_limits<double>::infinity();
  }
  /// Residual relative to the right-hand side.
  [[nodiscard]] double relative_residual() const {
    return rhs_norm > 0.0 ? residual / rhs_norm : residual;
  }
};

inline Eigen::Index numerical_rank(const Eigen::VectorXd& singular_values, double rank_tol) {
  if (singular_values.size() == 0) return 0;
  const double cutoff = rank_tol * singular_values(0);
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < singular_values.size(); ++i) {
    if (singular_values(i) > cutoff) ++rank;
  }
  return rank;
}

inline Eigen::Index numerical_rank(const CMatrix& m, double rank_tol) {
  Eigen::JacobiSVD<CMatrix> svd(m);
  return numerical_rank(svd.singularValues(), rank_tol);
}

/// Scales every row to unit max-norm, so rank decisions do not depend on how
/// individual conditions are normalized. Zero rows are left as they are.
template <typename Rhs>
void equilibrate_rows(CMatrix& m, Eigen::PlainObjectBase<Rhs>& b) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    const double scale = m.row(i).cwiseAbs().maxCoeff();
    if (scale > 0.0) {
      m.row(i) /= scale;
      b.row(i) /= scale;
    }
  }
}

inline void equilibrate_rows(CMatrix& m) {
  CVector dummy = CVector::Zero(m.rows());
  equilibrate_rows(m, dummy);
}

/// Solves m x = b through an SVD of the row-equilibrated system, dropping
/// singular values below rank_tol * sigma_max.
inline TruncatedSolve solve_truncated(CMatrix m, CVector b, const Tolerances& tol) {
  equilibrate_rows(m, b);
  Eigen::JacobiSVD<CMatrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::VectorXd& s = svd.singularValues();
  TruncatedSolve out;
  out.rank = numerical_rank(s, tol.rank);
  out.sigma_max = s.size() > 0 ? s(0) : 0.0;
  out.sigma_min = s.size() > 0 ? s(s.size() - 1) : 0.0;
  out.full_rank = out.rank == m.cols();

  const CMatrix& u = svd.matrixU();
  const CMatrix& v = svd.matrixV();
  CVector coeffs = u.leftCols(out.rank).adjoint() * b;
  for (Eigen::Index i = 0; i < out.rank; ++i) coeffs(i) /= s(i);
  out.x = v.leftCols(out.rank) * coeffs;
  out.null_space = v.rightCols(m.cols() - out.rank);

  out.rhs_norm = b.norm();
  out.residual = (m * out.x - b).norm();
  out.consistent = out.residual <= tol.consistency * std::max(out.rhs_norm, 1e-300);
  return out;
}

/// Largest absolute entry.
inline double max_norm(const CMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

}  // namespace qgfilter
