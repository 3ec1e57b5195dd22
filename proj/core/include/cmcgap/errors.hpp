#pragma once

#include <stdexcept>
#include <string>

namespace cmcgap {

/// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A point or radius outside the ball on which the conformal factor is defined,
/// or outside the region where the potential sigma is positive.
class DomainError : public Error {
public:
    DomainError(const std::string& what, double offending)
        : Error(what), offending_(offending) {}
    double offending() const noexcept { return offending_; }

private:
    double offending_;
};

/// Profile radius x <= 0: the rotation axis was reached.
class SingularAxisError : public Error {
public:
    using Error::Error;
};

/// Input violates a documented precondition (bad parameter range, degenerate curve...).
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// Adaptive integrator or quadrature could not meet the requested tolerance.
class ToleranceError : public Error {
public:
    using Error::Error;
};

/// A shooting or root search found no sign change / no event in the search range.
class NoRootError : public Error {
public:
    using Error::Error;
};

/// Malformed configuration (JSON selection, CLI flags).
class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace cmcgap
