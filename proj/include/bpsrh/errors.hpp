#pragma once

#include <stdexcept>
#include <string>

namespace bpsrh {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Evaluation requested at (or within tolerance of) a pole of Gamma.
struct PoleError : Error {
    PoleError(const std::string& what, long pole_index)
        : Error(what), index(pole_index) {}
    /// n such that the offending argument is the non-positive integer -n.
    long index;
};

/// Argument lies on a branch cut and no side was selected.
struct BranchCutError : Error {
    using Error::Error;
};

/// z = 0 passed to a logarithm or power.
struct ZeroArgument : Error {
    using Error::Error;
};

/// Input violates a domain precondition.
struct DomainError : Error {
    using Error::Error;
};

/// Adaptive quadrature could not reach the requested tolerance in budget.
struct ToleranceError : Error {
    using Error::Error;
};

/// A ray expected to be generic coincides with an active ray.
struct ActiveRayError : Error {
    using Error::Error;
};

/// A Stokes-factor base vanished with a negative exponent.
struct SFactorZero : Error {
    using Error::Error;
};

/// Two rays do not bound a convex sector in clockwise order.
struct SectorError : Error {
    using Error::Error;
};

/// Geometric hypothesis of a non-existence witness fails.
struct HypothesisError : Error {
    using Error::Error;
};

}  // namespace bpsrh
