#pragma once

#include <stdexcept>
#include <string>

namespace tessera {

/// Invalid model parameters or configuration (maps to CLI exit code 2).
class ParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Numerical failure: non-convergent quadrature, exhausted rejection loops.
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A realization would exceed the configured resource limits.
class ResourceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Too few faces in the reference set to form an estimate.
class InsufficientSampleError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed or incompatible serialized document.
class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace tessera
