#pragma once

#include <stdexcept>
#include <string>

namespace spinkvn {

// A caller violated a documented precondition (unnormalized state, too few
// frames, off-shell velocity, ...).
struct PreconditionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// A configuration cannot be run: sampling guards, inconsistent grids,
// missing potential data.
struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

// u^0 <= 0 handed to a boost constructor.
struct DirectionOfTimeError : DomainError {
  using DomainError::DomainError;
};

// Numerical integrity failure during a run (NaN, imaginary trace residue).
struct IntegrityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace spinkvn
