#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "qgfilter/dtn.hpp"

namespace qgfilter {

struct TwoPortAmplitudes {
  cplx R;
  cplx T;
};

struct SeparatorAmplitudes {
  cplx R;
  cplx T1;
  cplx T2;
};

namespace detail {
inline void require_wavenumber(double k) {
  if (!(k > 0.0) || !std::isfinite(k)) throw InputError("wavenumber must be positive");
}
}  // namespace detail

/// Band-pass junction: T = 1 / (1 + alpha^2 Lambda / (2ik)), R = T - 1.
/// No solution at the contact (sigma0 or pole) gives T = 0.
inline TwoPortAmplitudes bandpass_transmission(const DtNSample& lambda, double alpha, double k) {
  detail::require_wavenumber(k);
  if (!lambda.finite()) return {-1.0, 0.0};
  const cplx T = 1.0 / (1.0 + alpha * alpha * lambda.value / cplx(0.0, 2.0 * k));
  return {T - 1.0, T};
}

/// Band-stop junction: T = -Lambda / (Lambda + ik / (2 alpha^2)). Its contact
/// rows give psi'_-(0) = -psi'_+(0), hence R = 1 + T.
inline TwoPortAmplitudes bandstop_transmission(const DtNSample& lambda, double alpha, double k) {
  detail::require_wavenumber(k);
  if (!lambda.finite()) return {0.0, -1.0};
  const double lam = lambda.value;
  const cplx T = -lam / (lam + cplx(0.0, k / (2.0 * alpha * alpha)));
  return {1.0 + T, T};
}

/// Two-output separator. Output 2 collects energies where Lambda vanishes.
inline SeparatorAmplitudes separator_transmission(const DtNSample& lambda, double alpha, double beta,
                                                  double k) {
  detail::require_wavenumber(k);
  if (!(beta > 0.0)) throw InputError("separator: beta must be positive");
  cplx T1;
  cplx T2;
  if (!lambda.finite()) {
    const double denom = 1.0 / beta + beta + beta * beta * beta;
    T1 = -2.0 / denom;
    T2 = 2.0 * beta * beta / denom;
  } else {
    const double a2l = alpha * alpha * lambda.value;
    const cplx ik(0.0, k);
    const cplx inner = ik + beta * beta * a2l;
    T1 = -2.0 * a2l / (a2l / beta + (1.0 / beta + beta) * inner);
    T2 = 2.0 / (a2l / (beta * inner) + 1.0 / beta + beta);
  }
  // beta (1 + R) = T2
  return {T2 / beta - 1.0, T1, T2};
}

/// |2(1 - 1/T_pass) - 1 / (2(1 + 1/T_stop))|; zero for amplitudes of the same
/// attached graph, coupling strength and energy.
inline double duality_residual(cplx t_pass, cplx t_stop) {
  if (t_pass == 0.0) throw InputError("duality_residual: T_pass must be nonzero");
  if (t_stop == 0.0 || t_stop == -1.0) throw InputError("duality_residual: T_stop must not be 0 or -1");
  const cplx lhs = 2.0 * (1.0 - 1.0 / t_pass);
  const cplx rhs = 1.0 / (2.0 * (1.0 + 1.0 / t_stop));
  return std::abs(lhs - rhs);
}

/// One point of a device transmission curve.
struct DeviceCurvePoint {
  double k = 0.0;
  double E = 0.0;
  DtNClass classification = DtNClass::Regular;
  /// Set when the point could not be evaluated; amplitudes are NaN then.
  std::optional<std::string> diagnostic;
  cplx R;
  /// (T) for two-port devices, (T1, T2) for the separator.
  std::vector<cplx> T;
  std::vector<double> P;
  double unitarity_residual = 0.0;
};

/// Evaluates the graph's contact device at k through Lambda.
inline DeviceCurvePoint evaluate_device(const MetricGraph& g, double k, const Tolerances& tol = {}) {
  DeviceCurvePoint pt;
  pt.k = k;
  pt.E = g.units().energy(k);
  const DtNSample s = dtn(g, pt.E, tol);
  pt.classification = s.classification;
  const auto& c = g.coupling();
  if (const auto* bp = std::get_if<coupling::BandPass>(&c)) {
    const auto a = bandpass_transmission(s, bp->alpha, k);
    pt.R = a.R;
    pt.T = {a.T};
  } else if (const auto* bs = std::get_if<coupling::BandStop>(&c)) {
    const auto a = bandstop_transmission(s, bs->alpha, k);
    pt.R = a.R;
    pt.T = {a.T};
  } else if (const auto* sep = std::get_if<coupling::Separator>(&c)) {
    const auto a = separator_transmission(s, sep->alpha, sep->beta, k);
    pt.R = a.R;
    pt.T = {a.T1, a.T2};
  } else {
    throw Unsupported("no closed-form amplitude for a delta-junction contact; use scatter_direct");
  }
  double total = std::norm(pt.R);
  for (const cplx& t : pt.T) {
    pt.P.push_back(std::norm(t));
    total += std::norm(t);
  }
  pt.unitarity_residual = std::abs(total - 1.0);
  return pt;
}

/// Uniform sweep over k. Numerical diagnostics are recorded per point and do not
/// abort the sweep.
inline std::vector<DeviceCurvePoint> sweep_device(const MetricGraph& g, double k_min, double k_max,
                                                  std::size_t samples, const Tolerances& tol = {}) {
  if (!(k_min > 0.0)) throw InputError("sweep: k_min must be positive");
  const auto grid = uniform_grid(k_min, k_max, samples);
  const std::size_t outputs = port_count(g.coupling()) - 1;
  std::vector<DeviceCurvePoint> curve;
  curve.reserve(grid.size());
  for (double k : grid) {
    try {
      curve.push_back(evaluate_device(g, k, tol));
    } catch (const NumericalDiagnostic& err) {
      DeviceCurvePoint pt;
      pt.k = k;
      pt.E = g.units().energy(k);
      pt.diagnostic = err.what();
      const double nan = std::nan("");
      pt.R = {nan, nan};
      pt.T.assign(outputs, cplx(nan, nan));
      pt.P.assign(outputs, nan);
      pt.unitarity_residual = nan;
      curve.push_back(std::move(pt));
    }
  }
  return curve;
}

}  // namespace qgfilter
