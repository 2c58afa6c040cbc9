#pragma once

#include <stdexcept>
#include <string>

namespace qwalk {

/// Raised for malformed inputs: non-finite angles, empty records, bad specs.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The momentum lattice cannot hold the state: either a requested momentum
/// lies outside [-L, L] or probability has reached the lattice edge.
class LatticeTooSmall : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// File system failure; the message carries the offending path.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace qwalk
