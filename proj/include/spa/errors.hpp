#pragma once

#include <stdexcept>
#include <string>

namespace spa {

// Degenerate geometry at evaluation time (zero denominator, design bending
// opposite to its orientation).
class GeometryError : public std::runtime_error {
public:
    explicit GeometryError(const std::string& what) : std::runtime_error(what) {}
};

// Configuration file problems: parse errors carry line numbers, validation
// errors carry the dotted key path.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Provably empty feasible set; the message names the binding constraints.
class InfeasibleError : public std::runtime_error {
public:
    explicit InfeasibleError(const std::string& what) : std::runtime_error(what) {}
};

// Numerical failure: integrator divergence, Riccati residual out of
// tolerance, non-convergent fits.
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

class IdentificationError : public NumericError {
public:
    explicit IdentificationError(const std::string& what) : NumericError(what) {}
};

}  // namespace spa
