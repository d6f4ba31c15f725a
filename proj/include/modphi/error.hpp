#pragma once

#include <stdexcept>
#include <string>

namespace modphi {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input outside an operation's precondition (bad domain, bad parameter).
/// The CLI maps this family to exit status 2.
class DomainError : public Error {
public:
    using Error::Error;
};

class PoleError : public DomainError {
public:
    using DomainError::DomainError;
};

/// A measure fails the integrability condition it was tagged with.
class IntegrabilityError : public DomainError {
public:
    using DomainError::DomainError;
};

/// Requested moment of a Lévy measure diverges.
class MomentDivergenceError : public DomainError {
public:
    using DomainError::DomainError;
};

/// Numerical budget exhausted (quadrature subdivisions, series terms,
/// enumeration sizes). The CLI maps this family to exit status 3.
class BudgetError : public Error {
public:
    BudgetError(const std::string& what, double estimate = 0.0, double error_bound = 0.0)
        : Error(what), estimate_(estimate), error_bound_(error_bound) {}

    double estimate() const noexcept { return estimate_; }
    double error_bound() const noexcept { return error_bound_; }

private:
    double estimate_;
    double error_bound_;
};

/// A logarithm cannot be tracked because its argument is (numerically) zero.
class BranchError : public BudgetError {
public:
    using BudgetError::BudgetError;
};

/// Data that should agree by construction does not (e.g. point counts
/// reconstructed from an L-polynomial vs direct counts).
class InconsistencyError : public BudgetError {
public:
    using BudgetError::BudgetError;
};

}  // namespace modphi
