#pragma once

#include <stdexcept>
#include <string>

namespace conefix {

// Argument outside the admissible set of a scalar function (profile, solver).
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Binary operation on vectors living on different grids.
class GridMismatch : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Bad configuration or malformed input file.
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A numerically checked hypothesis or conclusion did not hold.
class CertificationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Iteration or bisection ran out of steps.
class NonConvergence : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace conefix
