// errors.hpp: exception types shared by every module

#pragma once

#include <stdexcept>
#include <string>

namespace chiral {

// Parameter outside its documented domain (D ∉ [-1, 1], bad index, Ω = 0, ...).
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Malformed invocation: unknown recipe or subcommand, empty grid, bad flag.
class UsageError : public DomainError {
public:
    using DomainError::DomainError;
};

// Coupling matrix too ill-conditioned to invert: the point sits on (or next to)
// one of the critical corners of the phase diagram.
class CriticalPointError : public std::runtime_error {
public:
    CriticalPointError(const std::string& what, double condition_estimate)
        : std::runtime_error(what), condition_estimate_(condition_estimate) {}

    double condition_estimate() const noexcept { return condition_estimate_; }

private:
    double condition_estimate_;
};

// Eigen-solver or linear-algebra failure.
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Adaptive integration could not proceed (step underflow, trace drift).
class IntegrationError : public std::runtime_error {
public:
    IntegrationError(const std::string& what, double time)
        : std::runtime_error(what), time_(time) {}

    double time() const noexcept { return time_; }

private:
    double time_;
};

// A threshold was never reached within the allowed horizon.
class TimeoutError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Signal window too short to resolve the requested statistic.
class InsufficientDataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Request exceeds what a routine supports (e.g. Lindblad oracle beyond 6 atoms).
class CapabilityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Output location cannot be written.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace chiral
