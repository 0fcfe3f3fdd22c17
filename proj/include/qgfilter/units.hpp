#pragma once

#include <cmath>
#include <complex>

#include "qgfilter/errors.hpp"

namespace qgfilter {

/// Physical scales entering the kinetic term. The default (1, 1, 1) gives
/// E = k^2 and a flux angle equal to B*S.
struct UnitSystem {
  double hbar = 1.0;
  double two_m = 1.0;
  double charge = 1.0;

  void validate() const {
    if (!(hbar > 0.0) || !(two_m > 0.0) || !(charge > 0.0)) {
      throw InputError("units: hbar, two_m and charge must be strictly positive");
    }
  }

  /// Energy of a free particle with wavenumber k.
  [[nodiscard]] double energy(double k) const { return hbar * hbar * k * k / two_m; }

  [[nodiscard]] double wavenumber(double energy) const {
    return std::sqrt(two_m * energy) / hbar;
  }

  /// Phase slope q*A/hbar acquired per unit length under a constant vector potential.
  [[nodiscard]] double phase_slope(double vector_potential) const {
    return charge * vector_potential / hbar;
  }

  /// Principal-branch local wavenumber; imaginary (evanescent) when energy < potential.
  [[nodiscard]] std::complex<double> local_wavenumber(double energy,
                                                      double scalar_potential) const {
    return std::sqrt(std::complex<double>(two_m * (energy - scalar_potential), 0.0)) / hbar;
  }

  friend bool operator==(const UnitSystem&, const UnitSystem&) = default;
};

}  // namespace qgfilter
