#pragma once

#include <stdexcept>
#include <string>

namespace qhforge {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Operands live over different curve-class lattices.
struct LatticeMismatch : Error {
    using Error::Error;
};

// Inversion of an element with vanishing energy-0 part.
struct NotAUnit : Error {
    using Error::Error;
};

struct DegeneratePairing : Error {
    using Error::Error;
};

// A correlator reduction was applied outside its domain.
struct ReductionError : Error {
    using Error::Error;
};

// A required correlator is not present in the table.
struct MissingEntry : Error {
    using Error::Error;
};

// Truncation too coarse to certify a pivot or a value.
struct IncreaseCutoff : Error {
    using Error::Error;
};

// Request outside the supported genus-0 scope.
struct ScopeError : Error {
    using Error::Error;
};

}  // namespace qhforge
