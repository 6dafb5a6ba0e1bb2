#pragma once

#include <stdexcept>
#include <string>

namespace ptsym {

/// Base class for all toolkit errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Iterative eigenvalue solver did not converge.
struct NonConvergence : Error {
    using Error::Error;
};

/// Matrix exponential argument exceeds the configured norm bound.
struct OverflowRisk : Error {
    using Error::Error;
};

struct DimensionTooSmall : Error {
    using Error::Error;
};

struct WrongDimension : Error {
    using Error::Error;
};

/// Eigenvector basis requested where the operator is defective.
struct DefectiveEigenbasis : Error {
    using Error::Error;
};

/// Observable failed its Hermiticity tolerance.
struct NotHermitian : Error {
    using Error::Error;
};

/// Closed-form period requested at or beyond the breaking threshold.
struct NotPeriodic : Error {
    using Error::Error;
};

struct TooFewOscillations : Error {
    using Error::Error;
};

struct NonPositiveData : Error {
    using Error::Error;
};

struct NotSettled : Error {
    using Error::Error;
};

/// Eigenvalue spacing too close to the tolerance to classify reliably.
struct AmbiguousNearEP : Error {
    using Error::Error;
};

/// Bad scenario configuration (unknown key, unparsable value, ...).
struct ConfigError : Error {
    using Error::Error;
};

} // namespace ptsym
