#pragma once

#include <stdexcept>
#include <string>

namespace qcoalg {

// Base class for all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Dimension or length mismatch between operands.
class ShapeError : public Error {
public:
    using Error::Error;
};

// Input violates a structural invariant (non-unitary matrix, probabilities
// not summing to one, unknown state id, malformed file, ...).
class ValidationError : public Error {
public:
    using Error::Error;
};

// A numerical procedure failed to converge or stabilize (no recurrence found,
// rank did not stabilize, fit residual too large).
class NumericalError : public Error {
public:
    using Error::Error;
};

}  // namespace qcoalg
