#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <type_traits>
#include <variant>

#include "qgfilter/conditions.hpp"

namespace qgfilter {

/// Couplings joining the half-lines to the contact edge-ends of the attached graph.
///
/// Each one is written as a BoundaryPair over the vector
/// (input, output_1[, output_2], phi_1, ..., phi_n), values and outgoing
/// derivatives, with the half-lines first.
namespace coupling {

/// Scale-invariant band-pass junction.
struct BandPass {
  double alpha = 1.0;
};

/// Scale-invariant band-stop junction.
struct BandStop {
  double alpha = 1.0;
};

/// Three-port spectral separator; output 2 receives the spectrum of the attached graph.
struct Separator {
  double alpha = 1.0;
  double beta = 1.0;
};

/// Plain delta junction of the two half-lines and all contact edge-ends.
/// Used by the delta-potential approximation arrangement.
struct DeltaJunction {
  double strength = 0.0;
};

}  // namespace coupling

using ContactCoupling = std::variant<coupling::BandPass, coupling::BandStop,
                                     coupling::Separator, coupling::DeltaJunction>;

inline void validate_coupling(const ContactCoupling& c) {
  std::visit(
      [](const auto& v) {
        using V = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<V, coupling::DeltaJunction>) {
          if (!std::isfinite(v.strength)) throw InputError("delta junction: strength must be finite");
        } else {
          if (!(v.alpha > 0.0) || !std::isfinite(v.alpha)) {
            throw InputError("contact coupling: alpha must be positive");
          }
          if constexpr (std::is_same_v<V, coupling::Separator>) {
            if (!(v.beta > 0.0) || !std::isfinite(v.beta)) {
              throw InputError("separator coupling: beta must be positive");
            }
          }
        }
      },
      c);
}

/// Number of half-lines (input included).
inline std::size_t port_count(const ContactCoupling& c) {
  return std::holds_alternative<coupling::Separator>(c) ? 3 : 2;
}

inline std::string coupling_name(const ContactCoupling& c) {
  static constexpr const char* names[] = {"bandpass", "bandstop", "separator", "delta_junction"};
  return names[c.index()];
}

/// Coupling matrices at the contact for n attached edge-ends. The returned pair
/// satisfies A*Psi + B*Psi' = 0 with Psi ordered half-lines first.
inline BoundaryPair contact_boundary_pair(const ContactCoupling& c, std::size_t n) {
  const auto ports = static_cast<Eigen::Index>(port_count(c));
  const Eigen::Index size = ports + static_cast<Eigen::Index>(n);

  // Written as L*Psi' = M*Psi, then A = -M, B = L.
  CMatrix L = CMatrix::Zero(size, size);
  CMatrix M = CMatrix::Zero(size, size);

  if (const auto* bp = std::get_if<coupling::BandPass>(&c)) {
    const double a = bp->alpha;
    L(0, 0) = 1.0;
    L(0, 1) = 1.0;
    for (Eigen::Index j = 2; j < size; ++j) L(0, j) = a;
    M(1, 0) = -1.0;
    M(1, 1) = 1.0;
    for (Eigen::Index j = 2; j < size; ++j) {
      M(j, 0) = -a;
      M(j, j) = 1.0;
    }
  } else if (const auto* bs = std::get_if<coupling::BandStop>(&c)) {
    const double a = bs->alpha;
    L(0, 0) = 1.0;
    L(1, 1) = 1.0;
    for (Eigen::Index j = 2; j < size; ++j) {
      L(0, j) = a;
      L(1, j) = a;
      M(j, 0) = -a;
      M(j, 1) = -a;
      M(j, j) = 1.0;
    }
  } else if (const auto* sep = std::get_if<coupling::Separator>(&c)) {
    const double a = sep->alpha;
    const double b = sep->beta;
    L(0, 0) = 1.0;
    L(0, 2) = b;
    L(1, 1) = 1.0;
    for (Eigen::Index j = 3; j < size; ++j) {
      L(0, j) = a;
      L(1, j) = a * b;
    }
    M(2, 0) = -b;
    M(2, 2) = 1.0;
    for (Eigen::Index j = 3; j < size; ++j) {
      M(j, 0) = -a;
      M(j, 1) = -a * b;
      M(j, j) = 1.0;
    }
  } else {
    const auto& dj = std::get<coupling::DeltaJunction>(c);
    return delta_pair(dj.strength, static_cast<std::size_t>(size));
  }
  return {-M, L};
}

}  // namespace qgfilter
