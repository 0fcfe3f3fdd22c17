#pragma once

#include <cstddef>
#include <string>
#include <variant>

#include "qgfilter/linalg.hpp"

namespace qgfilter {

/// Vertex boundary conditions A*Psi + B*Psi' = 0, where Psi collects the values
/// and Psi' the outgoing (covariant) derivatives of the incident edge-ends.
namespace condition {

/// Continuity plus vanishing derivative sum (Kirchhoff).
struct Free {};

/// Continuity plus derivative sum equal to strength times the common value.
struct Delta {
  double strength = 0.0;
};

struct Dirichlet {};

/// (I T; 0 0) Psi' = (S 0; -T* I) Psi with T of shape r x (d - r) and S Hermitian.
struct STForm {
  int r = 0;
  CMatrix T;
  CMatrix S;
};

struct RawAB {
  CMatrix A;
  CMatrix B;
};

}  // namespace condition

using VertexCondition = std::variant<condition::Free, condition::Delta, condition::Dirichlet,
                                     condition::STForm, condition::RawAB>;

struct BoundaryPair {
  CMatrix A;
  CMatrix B;
};

struct ValidationReport {
  bool ok = false;
  Eigen::Index rank = 0;
  double hermiticity_defect = 0.0;
};

/// Checks rank(A|B) = d and that A B* is Hermitian, both relative to tol.
inline ValidationReport validate_vertex_condition(const CMatrix& A, const CMatrix& B,
                                                  double tol = 1e-10) {
  if (A.rows() != A.cols() || B.rows() != B.cols() || A.rows() != B.rows() || A.rows() < 1) {
    throw InputError("vertex condition: A and B must be square matrices of equal size >= 1");
  }
  if (!(tol > 0.0)) throw InputError("vertex condition: tolerance must be positive");
  const Eigen::Index d = A.rows();
  CMatrix joined(d, 2 * d);
  joined << A, B;
  ValidationReport report;
  report.rank = numerical_rank(joined, tol);
  const CMatrix ab = A * B.adjoint();
  report.hermiticity_defect = max_norm(ab - ab.adjoint());
  report.ok = report.rank == d && report.hermiticity_defect <= tol * (1.0 + max_norm(ab));
  return report;
}

/// Builds the ST-form variant after checking shapes and exact Hermiticity of S.
inline VertexCondition st_form_condition(int r, const CMatrix& T, const CMatrix& S,
                                         std::size_t degree) {
  const auto d = static_cast<Eigen::Index>(degree);
  if (r < 0 || r > d) throw InputError("st_form: r must lie in [0, degree]");
  if (T.rows() != r || T.cols() != d - r) {
    throw InputError("st_form: T must have shape r x (degree - r)");
  }
  if (S.rows() != r || S.cols() != r) throw InputError("st_form: S must have shape r x r");
  if (S != S.adjoint()) throw InputError("st_form: S must be Hermitian");
  return condition::STForm{r, T, S};
}

inline BoundaryPair st_form_pair(const condition::STForm& st) {
  const Eigen::Index r = st.r;
  const Eigen::Index d = r + st.T.cols();
  BoundaryPair p{CMatrix::Zero(d, d), CMatrix::Zero(d, d)};
  // B = (I T; 0 0), A = -(S 0; -T* I)
  p.B.topLeftCorner(r, r).setIdentity();
  p.B.topRightCorner(r, d - r) = st.T;
  p.A.topLeftCorner(r, r) = -st.S;
  p.A.bottomLeftCorner(d - r, r) = st.T.adjoint();
  p.A.bottomRightCorner(d - r, d - r) = -CMatrix::Identity(d - r, d - r);
  return p;
}

/// Continuity rows followed by the derivative-sum row.
inline BoundaryPair delta_pair(double strength, std::size_t degree) {
  const auto d = static_cast<Eigen::Index>(degree);
  BoundaryPair p{CMatrix::Zero(d, d), CMatrix::Zero(d, d)};
  for (Eigen::Index i = 0; i + 1 < d; ++i) {
    p.A(i, i) = 1.0;
    p.A(i, i + 1) = -1.0;
  }
  p.A(d - 1, 0) = -strength;
  p.B.row(d - 1).setOnes();
  return p;
}

/// The (A, B) pair a condition induces at a vertex with the given number of edge-ends.
inline BoundaryPair to_boundary_pair(const VertexCondition& c, std::size_t degree) {
  const auto d = static_cast<Eigen::Index>(degree);
  struct Visitor {
    Eigen::Index d;
    std::size_t degree;
    BoundaryPair operator()(const condition::Free&) const {
      if (d < 1) throw InputError("free condition needs degree >= 1");
      return delta_pair(0.0, degree);
    }
    BoundaryPair operator()(const condition::Delta& c) const {
      if (d < 1) throw InputError("delta condition needs degree >= 1");
      return delta_pair(c.strength, degree);
    }
    BoundaryPair operator()(const condition::Dirichlet&) const {
      return {CMatrix::Identity(d, d), CMatrix::Zero(d, d)};
    }
    BoundaryPair operator()(const condition::STForm& st) const {
      // r = 0 with an empty T leaves the width to the vertex
      if (st.r == 0 && st.T.size() == 0) return st_form_pair({0, CMatrix(0, d), CMatrix(0, 0)});
      if (st.r + st.T.cols() != d) throw InputError("st_form: r + cols(T) must equal degree");
      return st_form_pair(st);
    }
    BoundaryPair operator()(const condition::RawAB& ab) const {
      if (ab.A.rows() != d || ab.B.rows() != d) {
        throw InputError("raw_ab: matrix size must equal vertex degree");
      }
      return {ab.A, ab.B};
    }
  };
  return std::visit(Visitor{d, degree}, c);
}

inline std::string condition_name(const VertexCondition& c) {
  static constexpr const char* names[] = {"free", "delta", "dirichlet", "st_form", "raw_ab"};
  return names[c.index()];
}

}  // namespace qgfilter
