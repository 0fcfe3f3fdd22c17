#pragma once

#include <cmath>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "qgfilter/direct.hpp"
#include "qgfilter/dtn.hpp"
#include "qgfilter/filters.hpp"

namespace qgfilter {

/// Delta-potential realization of the band-pass junction: the n contact
/// edge-ends are detached, each moved to its own point p_j, and every p_j is
/// linked to a point p_0 on the line by an edge of length epsilon.
struct ApproximationArrangement {
  double epsilon = 0.0;
  std::size_t n = 0;
  double alpha = 1.0;
  /// Strength at p_0: n (alpha - 1) / epsilon.
  double hub_strength = 0.0;
  /// Strength at every p_j: (1 - alpha) / (alpha epsilon).
  double end_strength = 0.0;
};

inline ApproximationArrangement bandpass_arrangement(std::size_t n, double alpha, double epsilon) {
  if (n < 1) throw InputError("approximation: need at least one contact edge-end");
  if (!(alpha > 0.0)) throw InputError("approximation: alpha must be positive");
  if (!(epsilon > 0.0)) throw InputError("approximation: epsilon must be positive");
  ApproximationArrangement a;
  a.epsilon = epsilon;
  a.n = n;
  a.alpha = alpha;
  a.hub_strength = static_cast<double>(n) * (alpha - 1.0) / epsilon;
  a.end_strength = (1.0 - alpha) / (alpha * epsilon);
  return a;
}

/// Links and delta strengths approximating an ST-form condition with r = 1,
/// S = 0 and a nonnegative row T = (t_2, ..., t_N): endpoint v_1 joins v_j
/// through a link of length d / t_j whenever t_j != 0.
struct GenericArrangement {
  double d = 0.0;
  /// Per entry of T; NaN where there is no link.
  std::vector<double> link_lengths;
  std::vector<bool> linked;
  /// Strength at v_1: (sum t^2 - sum t) / d.
  double hub_strength = 0.0;
  /// Strength at v_j: (1 - t_j) / d.
  std::vector<double> end_strengths;
};

inline GenericArrangement generic_arrangement(std::span<const double> t_row, double d) {
  if (!(d > 0.0)) throw InputError("generic arrangement: d must be positive");
  if (t_row.empty()) throw InputError("generic arrangement: T row is empty");
  GenericArrangement g;
  g.d = d;
  double sum = 0.0;
  double sum_sq = 0.0;
  for (double t : t_row) {
    if (!(t >= 0.0) || !std::isfinite(t)) {
      throw Unsupported("generic arrangement: only nonnegative T entries are covered");
    }
    g.linked.push_back(t != 0.0);
    g.link_lengths.push_back(t != 0.0 ? d / t : std::nan(""));
    g.end_strengths.push_back((1.0 - t) / d);
    sum += t;
    sum_sq += t * t;
  }
  g.hub_strength = (sum_sq - sum) / d;
  return g;
}

/// Replaces the band-pass contact of `g` by the delta arrangement of length epsilon.
/// The result is an ordinary graph whose contact is a delta junction at p_0.
inline MetricGraph build_bandpass_approximation(const MetricGraph& g, double epsilon) {
  const auto* bp = std::get_if<coupling::BandPass>(&g.coupling());
  if (!bp) throw Unsupported("delta approximation is only available for band-pass contacts");
  const auto arr = bandpass_arrangement(g.contact_degree(), bp->alpha, epsilon);

  GraphDescription d = g.description();
  std::set<std::string> vertex_ids;
  std::set<std::string> edge_ids;
  for (const auto& v : d.vertices) vertex_ids.insert(v.id);
  for (const auto& e : d.edges) edge_ids.insert(e.id);
  auto fresh = [](std::set<std::string>& used, std::string id) {
    while (used.count(id)) id += "'";
    used.insert(id);
    return id;
  };

  const std::string hub = d.contact;
  const auto& ends = g.contact_ends();
  std::vector<std::string> points;
  for (std::size_t j = 0; j < ends.size(); ++j) {
    const std::string p = fresh(vertex_ids, hub + "/p" + std::to_string(j + 1));
    points.push_back(p);
    d.vertices.push_back({p, condition::Delta{arr.end_strength}});
    Edge& moved = d.edges[ends[j].edge];
    (ends[j].side == EdgeSide::A ? moved.end_a : moved.end_b) = p;
  }
  for (std::size_t j = 0; j < ends.size(); ++j) {
    Edge link;
    link.id = fresh(edge_ids, hub + "/link" + std::to_string(j + 1));
    link.end_a = hub;
    link.end_b = points[j];
    link.length = epsilon;
    d.edges.push_back(link);
  }
  d.coupling = coupling::DeltaJunction{arr.hub_strength};
  return build_graph(std::move(d));
}

namespace detail {
inline cplx checked_ratio(cplx num, cplx den, double scale) {
  if (std::abs(den) <= 1e-14 * scale) {
    throw NumericalDiagnostic("approximate transmission: vanishing denominator");
  }
  return num / den;
}
}  // namespace detail

/// Transmission amplitude of the delta arrangement from a scalar Lambda.
/// Exact whenever the contact edge-ends all carry the same outgoing derivative
/// in the unit-Dirichlet solution (e.g. the field-free loop, a single stub).
inline cplx analytic_T_epsilon(double lambda_value, std::size_t n, double alpha, double epsilon, double k) {
  if (!std::isfinite(lambda_value)) throw InputError("analytic_T_epsilon: Lambda must be finite");
  if (n < 1 || !(alpha > 0.0) || !(epsilon > 0.0) || !(k > 0.0)) {
    throw InputError("analytic_T_epsilon: need n >= 1 and positive alpha, epsilon, k");
  }
  const double nd = static_cast<double>(n);
  const double s = std::sin(k * epsilon);
  const double c = std::cos(k * epsilon);
  const double aj = (1.0 - alpha) / (alpha * epsilon);
  const cplx two_ik(0.0, 2.0 * k);
  const double bracket = -(s / k) * (lambda_value / nd) + (c + aj * s / k);
  const cplx num = two_ik * bracket;
  const cplx den = c * lambda_value + nd * (k * s - aj * c) + (two_ik - nd * (alpha - 1.0) / epsilon) * bracket;
  return detail::checked_ratio(num, den, std::abs(num) + std::abs(c * lambda_value) + nd * std::abs(aj));
}

/// Same amplitude from the full contact Dirichlet-to-Neumann matrix. Reduces to
/// the scalar form when the all-ones vector is an eigenvector of the matrix.
inline cplx analytic_T_epsilon(const CMatrix& contact_dtn, double alpha, double epsilon, double k) {
  const Eigen::Index n = contact_dtn.rows();
  if (n < 1 || contact_dtn.cols() != n) throw InputError("analytic_T_epsilon: square DtN matrix required");
  if (!(alpha > 0.0) || !(epsilon > 0.0) || !(k > 0.0)) {
    throw InputError("analytic_T_epsilon: alpha, epsilon and k must be positive");
  }
  const double s = std::sin(k * epsilon);
  const double c = std::cos(k * epsilon);
  const double aj = (1.0 - alpha) / (alpha * epsilon);
  const double a0 = static_cast<double>(n) * (alpha - 1.0) / epsilon;
  const double g = c + aj * s / k;
  const double h = k * s - aj * c;
  const CMatrix id = CMatrix::Identity(n, n);
  // Values at p_j for unit hub value, then the derivative sum at the hub.
  const CVector u = (g * id - (s / k) * contact_dtn).fullPivLu().solve(CVector::Ones(n));
  const cplx q = CVector::Ones(n).dot((c * contact_dtn + h * id) * u);
  const cplx two_ik(0.0, 2.0 * k);
  return detail::checked_ratio(two_ik, two_ik + q - a0, 2.0 * k + std::abs(q) + std::abs(a0));
}

struct ConvergenceRow {
  double epsilon = 0.0;
  double k = 0.0;
  DtNClass classification = DtNClass::Regular;
  /// Direct solve of the arrangement.
  cplx T_epsilon;
  /// Closed form from the contact DtN matrix; empty when that matrix does not exist.
  std::optional<cplx> T_closed;
  /// Amplitude of the exact band-pass junction.
  cplx T_limit;
  double error = 0.0;
  /// error / previous-epsilon error at the same k; NaN for the first epsilon.
  double ratio = 0.0;
  /// k * epsilon >= 0.5: the arrangement is not small against the wavelength.
  bool guard_violated = false;
  std::optional<std::string> diagnostic;
};

/// |T_epsilon(k) - T(k)| over a decreasing epsilon schedule, rows grouped by k.
inline std::vector<ConvergenceRow> convergence_study(const MetricGraph& g, const std::vector<double>& epsilons,
                                                     const std::vector<double>& ks, const Tolerances& tol = {}) {
  const auto* bp = std::get_if<coupling::BandPass>(&g.coupling());
  if (!bp) throw Unsupported("convergence study is only available for band-pass contacts");
  if (epsilons.empty() || ks.empty()) throw InputError("convergence study: empty epsilon or k list");
  for (std::size_t i = 0; i < epsilons.size(); ++i) {
    if (!(epsilons[i] > 0.0)) throw InputError("convergence study: epsilons must be positive");
    if (i > 0 && !(epsilons[i] < epsilons[i - 1])) {
      throw InputError("convergence study: epsilons must be strictly decreasing");
    }
  }
  std::vector<MetricGraph> arrangements;
  for (double eps : epsilons) arrangements.push_back(build_bandpass_approximation(g, eps));

  std::vector<ConvergenceRow> rows;
  for (double k : ks) {
    if (!(k > 0.0)) throw InputError("convergence study: k must be positive");
    const double energy = g.units().energy(k);
    const DtNSample sample = dtn(g, energy, tol);
    const cplx t_limit = bandpass_transmission(sample, bp->alpha, k).T;
    const auto dtn_matrix = contact_dtn_matrix(g, energy, tol);
    double previous = std::nan("");
    for (std::size_t i = 0; i < epsilons.size(); ++i) {
      ConvergenceRow row;
      row.epsilon = epsilons[i];
      row.k = k;
      row.classification = sample.classification;
      row.T_limit = t_limit;
      row.guard_violated = k * epsilons[i] >= 0.5;
      try {
        row.T_epsilon = scatter_direct(arrangements[i], k, tol).transmissions.at(0);
        if (dtn_matrix) row.T_closed = analytic_T_epsilon(*dtn_matrix, bp->alpha, epsilons[i], k);
        row.error = std::abs(row.T_epsilon - t_limit);
      } catch (const NumericalDiagnostic& err) {
        row.diagnostic = err.what();
        row.T_epsilon = {std::nan(""), std::nan("")};
        row.error = std::nan("");
      }
      row.ratio = row.error / previous;
      previous = row.error;
      rows.push_back(row);
    }
  }
  return rows;
}

}  // namespace qgfilter
