#pragma once

#include <stdexcept>
#include <string>

namespace latcert {

// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Invalid input or configuration: violated precondition, divergent exponent,
// degenerate basis, non-decimal grid step, ...
class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& what) : Error(what) {}
};

// Requested tolerance cannot be certified at double precision (or within the
// summation budget).  Raised instead of silently returning a loose radius.
class ToleranceError : public Error {
public:
    explicit ToleranceError(const std::string& what) : Error(what) {}
};

// A quotient denominator enclosure contains zero: the point is numerically
// indistinguishable from the triangular lattice and the caller must use the
// near-triangular fallback path.
class NearTriangularError : public Error {
public:
    explicit NearTriangularError(const std::string& what) : Error(what) {}
};

}  // namespace latcert
