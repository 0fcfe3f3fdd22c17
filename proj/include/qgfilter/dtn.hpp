#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "qgfilter/edge_wave.hpp"

namespace qgfilter {

enum class DtNClass {
  /// Unique solution; Lambda is finite.
  Regular,
  /// No solution, and lambda is an eigenvalue of the attached graph
  /// (all its eigenfunctions vanish at the contact).
  Sigma0,
  /// Solutions exist but are not unique; Lambda is reported as 0.
  EigenConsistent,
  /// No solution while lambda is not an eigenvalue: a pole of Lambda.
  Pole,
};

inline const char* to_string(DtNClass c) {
  switch (c) {
    case DtNClass::Regular: return "regular";
    case DtNClass::Sigma0: return "sigma0";
    case DtNClass::EigenConsistent: return "eigen";
    case DtNClass::Pole: return "pole";
  }
  return "?";
}

/// Value and classification of the Dirichlet-to-Neumann function at one energy.
struct DtNSample {
  double lambda = 0.0;
  DtNClass classification = DtNClass::Regular;
  /// Lambda for Regular, 0 for EigenConsistent, NaN otherwise.
  double value = 0.0;
  /// Imaginary part dropped when truncating to real (Regular only).
  double imag_part = 0.0;
  double residual = 0.0;
  double condition_estimate = 0.0;

  [[nodiscard]] bool regular() const { return classification == DtNClass::Regular; }
  /// Lambda is usable as a finite number (Regular or EigenConsistent).
  [[nodiscard]] bool finite() const {
    return classification == DtNClass::Regular || classification == DtNClass::EigenConsistent;
  }

  static DtNSample make_regular(double lambda, double value) {
    DtNSample s;
    s.lambda = lambda;
    s.value = value;
    return s;
  }
  static DtNSample make(double lambda, DtNClass c) {
    DtNSample s;
    s.lambda = lambda;
    s.classification = c;
    s.value = c == DtNClass::EigenConsistent ? 0.0 : std::nan("");
    return s;
  }
};

struct DirichletSolution {
  DtNSample sample;
  /// One wave per edge; for EigenConsistent this is the minimum-norm solution.
  std::vector<EdgeWave> waves;
};

namespace detail {

inline void require_positive_energy(double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw InputError("energy must be positive and finite");
  }
}

/// Interior conditions plus one unit-value row per contact edge-end.
inline CMatrix dirichlet_matrix(const MetricGraph& g, const std::vector<EdgeBasis>& bases) {
  const auto unknowns = static_cast<Eigen::Index>(2 * g.edges().size());
  CMatrix m = CMatrix::Zero(unknowns, unknowns);
  Eigen::Index row = add_interior_rows(m, 0, g, bases, 0);
  for (const EdgeEnd& end : g.contact_ends()) {
    const auto val = bases[end.edge].value_row(end.side);
    const Eigen::Index col = edge_column(end.edge, 0);
    m(row, col) += val[0];
    m(row, col + 1) += val[1];
    ++row;
  }
  return m;
}

/// Outgoing derivative sum over the contact edge-ends for a coefficient vector.
inline cplx contact_derivative_sum(const MetricGraph& g, const std::vector<EdgeBasis>& bases,
                                   const CVector& x) {
  cplx sum = 0.0;
  for (const EdgeEnd& end : g.contact_ends()) {
    const auto der = bases[end.edge].derivative_row(end.side);
    const Eigen::Index col = edge_column(end.edge, 0);
    sum += der[0] * x(col) + der[1] * x(col + 1);
  }
  return sum;
}

}  // namespace detail

/// True when lambda is an eigenvalue of the attached graph with free coupling at the contact.
inline bool in_spectrum(const MetricGraph& g, double lambda, const Tolerances& tol = {}) {
  detail::require_positive_energy(lambda);
  const auto bases = edge_bases(g, lambda);
  const auto unknowns = static_cast<Eigen::Index>(2 * g.edges().size());
  CMatrix m = CMatrix::Zero(unknowns, unknowns);
  const Eigen::Index row = add_interior_rows(m, 0, g, bases, 0);
  add_vertex_rows(m, row, delta_pair(0.0, g.contact_degree()), g.contact_ends(), bases, 0);
  equilibrate_rows(m);
  return numerical_rank(m, tol.rank) < unknowns;
}

/// Solves the unit-Dirichlet problem at the contact and classifies the energy.
inline DirichletSolution solve_dirichlet_problem(const MetricGraph& g, double lambda,
                                                 const Tolerances& tol = {}) {
  detail::require_positive_energy(lambda);
  const auto bases = edge_bases(g, lambda);
  const CMatrix m = detail::dirichlet_matrix(g, bases);
  CVector rhs = CVector::Zero(m.rows());
  rhs.tail(static_cast<Eigen::Index>(g.contact_degree())).setOnes();

  const TruncatedSolve sol = solve_truncated(m, rhs, tol);
  DirichletSolution out;
  DtNSample& s = out.sample;
  s.lambda = lambda;
  s.residual = sol.residual;
  s.condition_estimate = sol.condition_estimate();

  if (sol.full_rank) {
    const cplx lam = detail::contact_derivative_sum(g, bases, sol.x);
    s.classification = DtNClass::Regular;
    s.value = lam.real();
    s.imag_part = lam.imag();
  } else if (sol.consistent) {
    s.classification = DtNClass::EigenConsistent;
    s.value = 0.0;
  } else {
    const double rel = sol.relative_residual();
    if (rel < 1e2 * tol.consistency) {
      throw NumericalDiagnostic("Dirichlet problem at lambda = " + std::to_string(lambda) +
                                " is singular with a residual too close to the consistency threshold");
    }
    s.classification = in_spectrum(g, lambda, tol) ? DtNClass::Sigma0 : DtNClass::Pole;
    s.value = std::nan("");
  }
  out.waves = edge_waves(sol.x, bases, 0);
  return out;
}

inline DtNSample dtn(const MetricGraph& g, double lambda, const Tolerances& tol = {}) {
  return solve_dirichlet_problem(g, lambda, tol).sample;
}

/// Lambda at the energy of line wavenumber k.
inline DtNSample dtn_at_wavenumber(const MetricGraph& g, double k, const Tolerances& tol = {}) {
  return dtn(g, g.units().energy(k), tol);
}

/// Full n x n Dirichlet-to-Neumann matrix at the contact: entry (i, j) is the
/// outgoing derivative at edge-end i when end j carries value 1 and the others 0.
/// Empty when the Dirichlet problem is singular.
inline std::optional<CMatrix> contact_dtn_matrix(const MetricGraph& g, double lambda,
                                                 const Tolerances& tol = {}) {
  detail::require_positive_energy(lambda);
  const auto bases = edge_bases(g, lambda);
  CMatrix m = detail::dirichlet_matrix(g, bases);
  const auto n = static_cast<Eigen::Index>(g.contact_degree());
  CMatrix rhs = CMatrix::Zero(m.rows(), n);
  rhs.bottomRows(n).setIdentity();
  equilibrate_rows(m, rhs);
  Eigen::JacobiSVD<CMatrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  if (numerical_rank(svd.singularValues(), tol.rank) < m.cols()) return std::nullopt;

  const CMatrix x = svd.solve(rhs);
  CMatrix dtn_matrix(n, n);
  const auto& ends = g.contact_ends();
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto der = bases[ends[static_cast<std::size_t>(i)].edge].derivative_row(ends[static_cast<std::size_t>(i)].side);
    const Eigen::Index col = edge_column(ends[static_cast<std::size_t>(i)].edge, 0);
    for (Eigen::Index j = 0; j < n; ++j) dtn_matrix(i, j) = der[0] * x(col, j) + der[1] * x(col + 1, j);
  }
  return dtn_matrix;
}

/// Wavenumbers in [k_min, k_max] at which Lambda vanishes.
///
/// Lambda is sampled on a uniform grid; sign changes between consecutive Regular
/// samples are refined by bisection. Brackets whose refinement runs into a
/// non-Regular point other than EigenConsistent, or whose end value is large,
/// straddle a pole and are dropped. Roots closer than the grid step may be missed.
inline std::vector<double> find_spectrum(const MetricGraph& g, double k_min, double k_max,
                                         std::size_t grid_points, const Tolerances& tol = {}) {
  if (!(k_min > 0.0) || !(k_min < k_max)) throw InputError("find_spectrum: need 0 < k_min < k_max");
  if (grid_points < 2) throw InputError("find_spectrum: need at least two grid points");

  const auto grid = uniform_grid(k_min, k_max, grid_points);
  std::vector<DtNSample> samples;
  samples.reserve(grid.size());
  for (double k : grid) {
    DtNSample s = dtn_at_wavenumber(g, k, tol);
    if (s.regular() && !std::isfinite(s.value)) {
      throw NumericalDiagnostic("find_spectrum: non-finite Lambda at k = " + std::to_string(k));
    }
    samples.push_back(s);
  }

  auto accept = [&](double k, double value) {
    return std::abs(value) <= 1e-6 * (1.0 + k);
  };

  std::vector<double> roots;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const DtNSample& s = samples[i];
    if (s.classification == DtNClass::EigenConsistent || (s.regular() && s.value == 0.0)) {
      roots.push_back(grid[i]);
      continue;
    }
    if (i + 1 == grid.size()) break;
    const DtNSample& t = samples[i + 1];
    if (!s.regular() || !t.regular()) continue;
    if (t.value == 0.0 || (s.value > 0.0) == (t.value > 0.0)) continue;

    double lo = grid[i];
    double hi = grid[i + 1];
    double f_lo = s.value;
    double f_hi = t.value;
    bool pole = false;
    std::optional<double> exact;
    while (hi - lo > tol.root) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      const DtNSample m = dtn_at_wavenumber(g, mid, tol);
      if (m.classification == DtNClass::EigenConsistent || (m.regular() && m.value == 0.0)) {
        exact = mid;
        break;
      }
      if (!m.regular()) {
        pole = true;
        break;
      }
      if ((m.value > 0.0) == (f_lo > 0.0)) {
        lo = mid;
        f_lo = m.value;
      } else {
        hi = mid;
        f_hi = m.value;
      }
    }
    if (pole) continue;
    double root = 0.0;
    if (exact) {
      root = *exact;
    } else {
      // Secant point inside the final bracket.
      root = lo - f_lo * (hi - lo) / (f_hi - f_lo);
      if (!(root >= lo && root <= hi)) root = 0.5 * (lo + hi);
      const DtNSample check = dtn_at_wavenumber(g, root, tol);
      const double value = check.finite() ? check.value : std::nan("");
      if (!std::isfinite(value) || !accept(root, value)) continue;
    }
    if (roots.empty() || root - roots.back() > tol.root) roots.push_back(root);
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

}  // namespace qgfilter
