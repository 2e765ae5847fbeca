#pragma once

#include <stdexcept>
#include <string>

namespace regp {

/// Precondition violated by the caller (bad parameter, length mismatch, ...).
class InvalidArgument : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Argument outside the range in which a routine is implemented or validated.
class RangeError : public std::out_of_range {
public:
  using std::out_of_range::out_of_range;
};

/// A numerical procedure failed to reach its tolerance.
class NumericError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Root finding was asked to work on an interval without a sign change.
class BracketError : public NumericError {
public:
  using NumericError::NumericError;
};

/// The request is well formed but physically or statistically inadmissible
/// (nonclassical input for a classical simulation, shared ECF seeds, ...).
class Refusal : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

} // namespace regp
