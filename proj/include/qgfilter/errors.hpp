#pragma once

#include <stdexcept>
#include <string>

namespace qgfilter {

/// Malformed or inconsistent user input: bad graph descriptions, bad ranges,
/// arguments outside an operation's domain.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A request the library deliberately does not cover.
class Unsupported : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A numerical decision (rank, consistency, limit) could not be made reliably.
class NumericalDiagnostic : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace qgfilter
