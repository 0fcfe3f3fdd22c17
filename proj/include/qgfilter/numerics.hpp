#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <vector>

#include "qgfilter/errors.hpp"

namespace qgfilter {

using cplx = std::complex<double>;

/// Tolerances shared by the solvers. Every field can be overridden from the CLI.
struct Tolerances {
  /// Singular values below rank * sigma_max count as zero.
  double rank = 1e-10;
  /// A truncated least-squares solve is consistent when its residual is below
  /// consistency * |rhs|.
  double consistency = 1e-8;
  /// Bracket width at which root bisection stops.
  double root = 1e-10;
  /// |sin(k l)| threshold below which the loop formulas switch to limit values.
  double pole_guard = 1e-8;
};

/// Uniform grid with both endpoints included.
inline std::vector<double> uniform_grid(double lo, double hi, std::size_t samples) {
  if (samples < 2) throw InputError("grid needs at least two samples");
  if (!(lo < hi)) throw InputError("grid range must be increasing");
  std::vector<double> grid(samples);
  const double step = (hi - lo) / static_cast<double>(samples - 1);
  for (std::size_t i = 0; i < samples; ++i) grid[i] = lo + step * static_cast<double>(i);
  grid.back() = hi;
  return grid;
}

/// Golden-section search for a minimum of a unimodal function on [lo, hi].
inline double golden_section_minimize(const std::function<double(double)>& f, double lo,
                                      double hi, double tol = 1e-14) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo;
  double b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  for (int iter = 0; iter < 200 && (b - a) > tol * (1.0 + std::abs(a) + std::abs(b)); ++iter) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return fc < fd ? c : d;
}

}  // namespace qgfilter
