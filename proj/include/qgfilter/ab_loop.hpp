#pragma once

#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "qgfilter/dtn.hpp"
#include "qgfilter/filters.hpp"
#include "qgfilter/graph.hpp"

namespace qgfilter {

/// A loop of length l enclosing area S in a perpendicular field B, attached to
/// the line through a band-pass junction of strength alpha.
///
/// Everything depends on the field only through the flux angle theta = qBS/hbar.
class LoopFilter {
 public:
  LoopFilter(double length, double area, double field, double alpha, UnitSystem units = {})
      : length_(length), area_(area), field_(field), alpha_(alpha), units_(units) {
    units_.validate();
    if (!(length_ > 0.0) || !(area_ > 0.0) || !(alpha_ > 0.0) || !std::isfinite(field_)) {
      throw InputError("loop filter: length, area and alpha must be positive, field finite");
    }
  }

  /// Circular loop (S = l^2 / 4pi) with the field chosen so that qBS/hbar = theta.
  static LoopFilter from_flux_angle(double length, double theta, double alpha, UnitSystem units = {}) {
    const double area = length * length / (4.0 * std::numbers::pi);
    return {length, area, theta * units.hbar / (units.charge * area), alpha, units};
  }

  [[nodiscard]] double length() const { return length_; }
  [[nodiscard]] double area() const { return area_; }
  [[nodiscard]] double field() const { return field_; }
  [[nodiscard]] double alpha() const { return alpha_; }
  [[nodiscard]] const UnitSystem& units() const { return units_; }

  [[nodiscard]] double theta() const { return units_.charge * field_ * area_ / units_.hbar; }
  /// Constant tangential vector potential S*B/l.
  [[nodiscard]] double vector_potential() const { return area_ * field_ / length_; }
  /// Field period 2*pi*hbar/(qS).
  [[nodiscard]] double flux_quantum() const {
    return 2.0 * std::numbers::pi * units_.hbar / (units_.charge * area_);
  }
  /// Field reduced into [0, flux_quantum).
  [[nodiscard]] double reduced_field() const {
    const double q = flux_quantum();
    double b = field_ - std::floor(field_ / q) * q;
    if (b >= q) b -= q;
    return b < 0.0 ? 0.0 : b;
  }
  /// Field pi*hbar/(qS) that moves the first passband to max_wavenumber().
  [[nodiscard]] double max_field() const { return 0.5 * flux_quantum(); }
  [[nodiscard]] double max_wavenumber() const { return std::numbers::pi / length_; }

  [[nodiscard]] LoopFilter with_field(double field) const {
    return {length_, area_, field, alpha_, units_};
  }

  /// The same device as a metric graph: one self-loop at the contact "v0".
  [[nodiscard]] MetricGraph to_graph() const { return to_graph(coupling::BandPass{alpha_}); }
  [[nodiscard]] MetricGraph to_graph(const ContactCoupling& c) const {
    GraphDescription d;
    d.units = units_;
    d.vertices = {{"v0", std::nullopt}};
    d.edges = {{"loop", "v0", "v0", length_, vector_potential(), 0.0}};
    d.contact = "v0";
    d.coupling = c;
    return build_graph(std::move(d));
  }

 private:
  double length_;
  double area_;
  double field_;
  double alpha_;
  UnitSystem units_;
};

/// Closed-form Lambda = -2k (cos kl - cos theta) / sin kl, with the removable
/// limit (Lambda = 0, EigenConsistent) and the pole classified explicitly when
/// |sin kl| < pole_guard.
inline DtNSample loop_dtn(const LoopFilter& f, double k, double pole_guard = 1e-8) {
  if (!(k > 0.0)) throw InputError("loop_dtn: k must be positive");
  const double lambda = f.units().energy(k);
  const double s = std::sin(k * f.length());
  const double detune = std::cos(k * f.length()) - std::cos(f.theta());
  if (std::abs(s) < pole_guard) {
    return DtNSample::make(lambda, std::abs(detune) < pole_guard ? DtNClass::EigenConsistent : DtNClass::Pole);
  }
  return DtNSample::make_regular(lambda, -2.0 * k * detune / s);
}

/// alpha^2 |cos kl - cos theta| / |sin kl|, so that P = 1 / (1 + detuning^2).
/// Infinite at poles, zero at removable points.
inline double loop_detuning(const LoopFilter& f, double k, double pole_guard = 1e-8) {
  const double s = std::sin(k * f.length());
  const double detune = std::cos(k * f.length()) - std::cos(f.theta());
  if (std::abs(s) < pole_guard) {
    return std::abs(detune) < pole_guard ? 0.0 : std::numeric_limits<double>::infinity();
  }
  return f.alpha() * f.alpha() * std::abs(detune / s);
}

/// P = [1 + alpha^4 ((cos kl - cos theta) / sin kl)^2]^{-1}.
inline double loop_transmission_probability(const LoopFilter& f, double k, double pole_guard = 1e-8) {
  if (!(k > 0.0)) throw InputError("loop transmission: k must be positive");
  const double x = loop_detuning(f, k, pole_guard);
  return std::isinf(x) ? 0.0 : 1.0 / (1.0 + x * x);
}

struct PeakList {
  std::vector<double> k;
  /// Reduced flux angle sits at 0 or pi, so neighbouring peaks coincide on an
  /// interval boundary.
  bool boundary_coincident = false;
};

/// Zeros of the loop Lambda, one per interval [N pi/l, (N+1) pi/l], N = 0..n_max.
///
/// With phi the reduced flux angle folded into [0, pi]:
/// k_N = (N pi + phi)/l for even N and ((N+1) pi - phi)/l for odd N.
inline PeakList peak_positions(const LoopFilter& f, int n_max) {
  if (n_max < 0) throw InputError("peak_positions: n_max must be >= 0");
  const double pi = std::numbers::pi;
  double phi = f.units().charge * f.reduced_field() * f.area() / f.units().hbar;
  if (phi > pi) phi = 2.0 * pi - phi;
  PeakList out;
  out.boundary_coincident = phi < 1e-12 || std::abs(phi - pi) < 1e-12;
  for (int n = 0; n <= n_max; ++n) {
    const double base = (n % 2 == 0) ? n * pi + phi : (n + 1) * pi - phi;
    out.k.push_back(base / f.length());
  }
  return out;
}

struct FieldSample {
  double B = 0.0;
  double theta = 0.0;
  double P = 0.0;
};

/// P at fixed k over a uniform field grid.
inline std::vector<FieldSample> field_sweep(const LoopFilter& f, double b_min, double b_max,
                                            std::size_t samples, double k, double pole_guard = 1e-8) {
  if (!std::isfinite(b_min) || !std::isfinite(b_max)) throw InputError("field_sweep: field range must be finite");
  std::vector<FieldSample> out;
  for (double b : uniform_grid(b_min, b_max, samples)) {
    const LoopFilter g = f.with_field(b);
    out.push_back({b, g.theta(), loop_transmission_probability(g, k, pole_guard)});
  }
  return out;
}

/// Location of the transmission maximum inside [k_lo, k_hi], refined by golden
/// section on the detuning (a monotone transform of P that is V-shaped at a peak).
inline double refine_peak(const LoopFilter& f, double k_lo, double k_hi, double pole_guard = 1e-8) {
  return golden_section_minimize([&](double k) { return loop_detuning(f, k, pole_guard); }, k_lo, k_hi);
}

/// Grid scan for local maxima of P followed by golden-section refinement of each.
inline std::vector<double> locate_peaks(const LoopFilter& f, double k_min, double k_max,
                                        std::size_t samples, double pole_guard = 1e-8) {
  const auto grid = uniform_grid(k_min, k_max, samples);
  std::vector<double> p(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) p[i] = loop_transmission_probability(f, grid[i], pole_guard);
  std::vector<double> peaks;
  for (std::size_t i = 1; i + 1 < grid.size(); ++i) {
    if (p[i] >= p[i - 1] && p[i] > p[i + 1]) peaks.push_back(refine_peak(f, grid[i - 1], grid[i + 1], pole_guard));
  }
  return peaks;
}

}  // namespace qgfilter
