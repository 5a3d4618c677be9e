#pragma once

#include <stdexcept>
#include <string>

namespace multcover {

// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Invalid input: bad parameter combinations, values outside the supported
// domain, unparsable function descriptions.  The CLI maps these to exit
// code 2.
struct DomainError : Error {
    using Error::Error;
};

// A dimension exponent lies outside the open interval where the measure
// question is non-trivial; the message explains which trivial value applies.
struct OutOfRangeError : DomainError {
    using DomainError::DomainError;
};

// Integer or exponent arithmetic would exceed representable bounds.  Raised
// instead of silently wrapping or saturating.
struct OverflowError : DomainError {
    using DomainError::DomainError;
};

// An explicit resource cap (cube cap, memory budget) would be exceeded; the
// message states the exact requirement so the caller can raise the cap.
struct BudgetError : DomainError {
    using DomainError::DomainError;
};

} // namespace multcover
