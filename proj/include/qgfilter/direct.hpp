#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "qgfilter/edge_wave.hpp"

namespace qgfilter {

/// Amplitudes of the full scattering problem at one wavenumber.
struct ScatteringResult {
  double k = 0.0;
  cplx R;
  /// One entry for two-port devices, two for the separator.
  std::vector<cplx> transmissions;
  /// |T_i|^2 in the order of transmissions.
  std::vector<double> probabilities;
  double reflection_probability = 0.0;
  double unitarity_residual = 0.0;
  /// Set when the global system was singular and the two-sided limit was used.
  bool from_limit = false;
};

namespace detail {

struct PortSolve {
  std::optional<CVector> amplitudes;
  bool singular = false;
};

/// One global solve: port amplitudes first, then two basis amplitudes per edge.
/// Every half-line carries e^{-iky} (incoming, only on `incoming`) plus a_p e^{iky}
/// in its outgoing coordinate y >= 0.
inline PortSolve solve_ports(const MetricGraph& g, double k, std::size_t incoming,
                             const Tolerances& tol) {
  const auto ports = static_cast<Eigen::Index>(port_count(g.coupling()));
  const auto n = static_cast<Eigen::Index>(g.contact_degree());
  const auto unknowns = ports + static_cast<Eigen::Index>(2 * g.edges().size());
  const double energy = g.units().energy(k);
  const auto bases = edge_bases(g, energy);
  const cplx ik(0.0, k);

  CMatrix m = CMatrix::Zero(unknowns, unknowns);
  CVector rhs = CVector::Zero(unknowns);

  const BoundaryPair contact = contact_boundary_pair(g.coupling(), static_cast<std::size_t>(n));
  const auto in = static_cast<Eigen::Index>(incoming);
  for (Eigen::Index i = 0; i < ports + n; ++i) {
    for (Eigen::Index p = 0; p < ports; ++p) m(i, p) = contact.A(i, p) + ik * contact.B(i, p);
    rhs(i) = -(contact.A(i, in) - ik * contact.B(i, in));
  }
  add_vertex_rows(m, 0, contact, g.contact_ends(), bases, ports, ports);
  add_interior_rows(m, ports + n, g, bases, ports);

  const TruncatedSolve sol = solve_truncated(m, rhs, tol);
  PortSolve out;
  if (sol.full_rank) {
    out.amplitudes = sol.x.head(ports);
    return out;
  }
  out.singular = true;
  // A singular but consistent system still fixes the amplitudes when the null
  // space (bound states in the continuum) does not reach the half-lines.
  if (sol.consistent && (sol.null_space.rows() == 0 || max_norm(sol.null_space.topRows(ports)) < 1e-8)) {
    out.amplitudes = sol.x.head(ports);
  }
  return out;
}

inline ScatteringResult finish(double k, const CVector& a, std::size_t incoming, bool from_limit) {
  ScatteringResult r;
  r.k = k;
  r.from_limit = from_limit;
  r.R = a(static_cast<Eigen::Index>(incoming));
  r.reflection_probability = std::norm(r.R);
  double total = r.reflection_probability;
  for (Eigen::Index p = 0; p < a.size(); ++p) {
    if (p == static_cast<Eigen::Index>(incoming)) continue;
    r.transmissions.push_back(a(p));
    r.probabilities.push_back(std::norm(a(p)));
    total += std::norm(a(p));
  }
  r.unitarity_residual = std::abs(total - 1.0);
  return r;
}

inline ScatteringResult scatter_any(const MetricGraph& g, double k, std::size_t incoming,
                                    const Tolerances& tol) {
  if (!(k > 0.0) || !std::isfinite(k)) throw InputError("scatter: k must be positive");
  if (incoming >= port_count(g.coupling())) throw InputError("scatter: no such port");
  PortSolve direct = solve_ports(g, k, incoming, tol);
  if (direct.amplitudes) return finish(k, *direct.amplitudes, incoming, false);

  constexpr double probe = 1e-9;
  const PortSolve left = solve_ports(g, k - probe, incoming, tol);
  const PortSolve right = solve_ports(g, k + probe, incoming, tol);
  if (left.amplitudes && right.amplitudes &&
      (*left.amplitudes - *right.amplitudes).cwiseAbs().maxCoeff() <= 1e-6) {
    return finish(k, 0.5 * (*left.amplitudes + *right.amplitudes), incoming, true);
  }
  throw NumericalDiagnostic("scattering system singular at k = " + std::to_string(k) +
                            " and one-sided limits disagree");
}

}  // namespace detail

/// Two-port scattering (band-pass, band-stop or delta junction) by one global
/// linear solve, independent of the Dirichlet-to-Neumann function. `incoming`
/// selects the port the wave enters from (0: input line, 1: output line).
inline ScatteringResult scatter_direct(const MetricGraph& g, double k, const Tolerances& tol = {},
                                       std::size_t incoming = 0) {
  if (port_count(g.coupling()) != 2) {
    throw InputError("scatter_direct: contact coupling is not a two-port device");
  }
  return detail::scatter_any(g, k, incoming, tol);
}

/// Three-port separator scattering; transmissions are (T1, T2).
inline ScatteringResult scatter_separator_direct(const MetricGraph& g, double k,
                                                 const Tolerances& tol = {}) {
  if (!std::holds_alternative<coupling::Separator>(g.coupling())) {
    throw InputError("scatter_separator_direct: contact coupling is not a separator");
  }
  return detail::scatter_any(g, k, 0, tol);
}

}  // namespace qgfilter
