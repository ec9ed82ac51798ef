#pragma once

#include <stdexcept>
#include <string>

namespace rci {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Operand shapes are incompatible with the requested operation.
class DimensionError : public Error {
public:
    using Error::Error;
};

/// Iteration failed to converge, or a non-finite value appeared.
class NumericError : public Error {
public:
    using Error::Error;
};

/// A matrix required to be Hurwitz is not.
class StabilityError : public Error {
public:
    using Error::Error;
};

/// The eigenvalue problem has no feasible point (A_K(0) not Hurwitz).
class InfeasibleEvpError : public StabilityError {
public:
    using StabilityError::StabilityError;
};

/// A matrix required to be positive definite is not.
class DefinitenessError : public Error {
public:
    using Error::Error;
};

/// A scalar parameter lies outside its admissible range.
class ParameterError : public Error {
public:
    using Error::Error;
};

/// A plant was evaluated outside the domain where its dynamics are defined.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Malformed or inconsistent run configuration.
class ConfigError : public Error {
public:
    using Error::Error;
};

} // namespace rci
