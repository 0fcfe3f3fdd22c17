#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

#include "qgfilter/graph.hpp"

namespace qgfilter {

/// Solution space on one edge at a fixed energy.
///
/// Two bases are used, both multiplied by the gauge factor e^{i a x}:
///  - oscillatory edges (|Im kappa| l <= 1): cos(kappa x) and sin(kappa x)/kappa,
///    which stay independent on arbitrarily short edges;
///  - strongly evanescent edges: e^{i kappa x} and e^{i kappa (l - x)} with
///    Im kappa >= 0, both bounded by 1.
/// Derivatives are covariant, D = d/dx - i a, and taken in the outgoing sense.
class EdgeBasis {
 public:
  EdgeBasis(const Edge& edge, const UnitSystem& units, double energy)
      : length_(edge.length),
        slope_(units.phase_slope(edge.vector_potential)),
        kappa_(units.local_wavenumber(energy, edge.scalar_potential)) {
    if (std::abs(kappa_) * length_ < 1e-12) {
      throw NumericalDiagnostic("edge '" + edge.id + "': energy coincides with its scalar potential");
    }
    const cplx i(0.0, 1.0);
    gauge_phase_ = std::exp(i * slope_ * length_);
    trig_ = std::abs(kappa_.imag()) * length_ <= 1.0;
    if (trig_) {
      cos_ = std::cos(kappa_ * length_);
      sin_over_kappa_ = std::sin(kappa_ * length_) / kappa_;
      kappa_sin_ = kappa_ * std::sin(kappa_ * length_);
    } else {
      span_phase_ = std::exp(i * kappa_ * length_);
    }
  }

  [[nodiscard]] cplx kappa() const { return kappa_; }
  [[nodiscard]] double slope() const { return slope_; }
  [[nodiscard]] double length() const { return length_; }

  /// Coefficients of the end value as a functional of the two basis amplitudes.
  [[nodiscard]] std::array<cplx, 2> value_row(EdgeSide side) const {
    if (trig_) {
      if (side == EdgeSide::A) return {1.0, 0.0};
      return {gauge_phase_ * cos_, gauge_phase_ * sin_over_kappa_};
    }
    if (side == EdgeSide::A) return {1.0, span_phase_};
    return {gauge_phase_ * span_phase_, gauge_phase_};
  }

  /// Coefficients of the outgoing covariant derivative at an end.
  [[nodiscard]] std::array<cplx, 2> derivative_row(EdgeSide side) const {
    if (trig_) {
      if (side == EdgeSide::A) return {0.0, 1.0};
      return {gauge_phase_ * kappa_sin_, -gauge_phase_ * cos_};
    }
    const cplx ik = cplx(0.0, 1.0) * kappa_;
    if (side == EdgeSide::A) return {ik, -ik * span_phase_};
    return {-ik * gauge_phase_ * span_phase_, ik * gauge_phase_};
  }

  /// Converts basis amplitudes to C+ / C- of e^{iax}(C+ e^{i kappa x} + C- e^{-i kappa x}).
  [[nodiscard]] std::array<cplx, 2> plane_wave_coefficients(cplx c1, cplx c2) const {
    if (trig_) {
      const cplx s = c2 / (cplx(0.0, 2.0) * kappa_);
      return {0.5 * c1 + s, 0.5 * c1 - s};
    }
    return {c1, c2 * span_phase_};
  }

 private:
  double length_;
  double slope_;
  cplx kappa_;
  cplx gauge_phase_;
  bool trig_ = true;
  cplx cos_;
  cplx sin_over_kappa_;
  cplx kappa_sin_;
  cplx span_phase_;
};

/// phi(x) = e^{i a x} (C+ e^{i kappa x} + C- e^{-i kappa x}) on [0, l].
struct EdgeWave {
  std::size_t edge = 0;
  cplx c_plus;
  cplx c_minus;
  cplx kappa;
  double slope = 0.0;

  [[nodiscard]] cplx value(double x) const {
    const cplx i(0.0, 1.0);
    return std::exp(i * slope * x) * (c_plus * std::exp(i * kappa * x) + c_minus * std::exp(-i * kappa * x));
  }
  /// Plain derivative d/dx.
  [[nodiscard]] cplx derivative(double x) const {
    const cplx i(0.0, 1.0);
    return std::exp(i * slope * x) *
           ((i * (slope + kappa)) * c_plus * std::exp(i * kappa * x) +
            (i * (slope - kappa)) * c_minus * std::exp(-i * kappa * x));
  }
};

/// Per-edge bases for one energy, in graph edge order.
inline std::vector<EdgeBasis> edge_bases(const MetricGraph& g, double energy) {
  std::vector<EdgeBasis> bases;
  bases.reserve(g.edges().size());
  for (const Edge& e : g.edges()) bases.emplace_back(e, g.units(), energy);
  return bases;
}

/// Column of the first basis amplitude of an edge inside a global system.
inline Eigen::Index edge_column(std::size_t edge, Eigen::Index offset) {
  return offset + 2 * static_cast<Eigen::Index>(edge);
}

/// Writes the rows of A*Psi + B*Psi' = 0 over the given edge-ends into m,
/// starting at row0. Only edge columns are touched; `first_end` skips leading
/// entries of the pair that belong to half-lines.
inline void add_vertex_rows(CMatrix& m, Eigen::Index row0, const BoundaryPair& pair,
                            const std::vector<EdgeEnd>& ends, const std::vector<EdgeBasis>& bases,
                            Eigen::Index column_offset, Eigen::Index first_end = 0) {
  const Eigen::Index rows = pair.A.rows();
  for (std::size_t j = 0; j < ends.size(); ++j) {
    const EdgeEnd& end = ends[j];
    const EdgeBasis& basis = bases[end.edge];
    const auto val = basis.value_row(end.side);
    const auto der = basis.derivative_row(end.side);
    const Eigen::Index pj = first_end + static_cast<Eigen::Index>(j);
    const Eigen::Index col = edge_column(end.edge, column_offset);
    for (Eigen::Index i = 0; i < rows; ++i) {
      const cplx a = pair.A(i, pj);
      const cplx b = pair.B(i, pj);
      if (a == 0.0 && b == 0.0) continue;
      m(row0 + i, col) += a * val[0] + b * der[0];
      m(row0 + i, col + 1) += a * val[1] + b * der[1];
    }
  }
}

/// Rows for every non-contact vertex; returns the next free row.
inline Eigen::Index add_interior_rows(CMatrix& m, Eigen::Index row0, const MetricGraph& g,
                                      const std::vector<EdgeBasis>& bases, Eigen::Index column_offset) {
  Eigen::Index row = row0;
  for (std::size_t v = 0; v < g.vertex_count(); ++v) {
    if (v == g.contact()) continue;
    const BoundaryPair& pair = g.boundary(v);
    add_vertex_rows(m, row, pair, g.ends_at(v), bases, column_offset);
    row += pair.A.rows();
  }
  return row;
}

/// Extracts per-edge waves from a vector of basis amplitudes.
inline std::vector<EdgeWave> edge_waves(const CVector& x, const std::vector<EdgeBasis>& bases,
                                        Eigen::Index column_offset) {
  std::vector<EdgeWave> waves;
  waves.reserve(bases.size());
  for (std::size_t e = 0; e < bases.size(); ++e) {
    const Eigen::Index col = edge_column(e, column_offset);
    const auto c = bases[e].plane_wave_coefficients(x(col), x(col + 1));
    waves.push_back({e, c[0], c[1], bases[e].kappa(), bases[e].slope()});
  }
  return waves;
}

}  // namespace qgfilter
