#pragma once

#include <stdexcept>
#include <string>

namespace mylar {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Invalid physical parameters (non-positive radius, mass, ...).
class ParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Base for failures of the numerical machinery (motion, integration).
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The u-radicand is non-positive everywhere: no classically allowed motion.
class NoClassicalMotion : public NumericError {
public:
    using NumericError::NumericError;
};

/// The radicand is positive on more than one interval and no seed was given.
class MultipleWells : public NumericError {
public:
    MultipleWells(const std::string& what, int wells) : NumericError(what), wells_(wells) {}
    int wells() const noexcept { return wells_; }

private:
    int wells_;
};

/// The allowed interval extends to the poles (|u| beyond the search box).
class UnboundedMotion : public NumericError {
public:
    using NumericError::NumericError;
};

/// Trajectory integration failed (step underflow, non-finite state, no event).
class IntegrationError : public NumericError {
public:
    using NumericError::NumericError;
};

/// (J_v, J_psi) lies on a region boundary: J_psi = 0 or J_psi = +-J_v.
class BoundaryError : public DomainError {
public:
    using DomainError::DomainError;
};

}  // namespace mylar
