#pragma once

#include <stdexcept>
#include <string>

namespace bach {

/// Malformed input file (bad row, unknown key, unparsable number).
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Network graph is not a tree rooted at a single slack bus.
class TopologyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A value is outside its admissible range (limits, lengths, fractions).
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A power flow did not converge where a converged solution is required.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace bach
