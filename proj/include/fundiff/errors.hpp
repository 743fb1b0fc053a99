#pragma once

#include <stdexcept>
#include <string>

namespace fundiff {

/// Bad user input: a parameter outside its valid range or a malformed
/// configuration. CLI exit code 1.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A parameter violating its type invariant. Carries the offending field name.
class ParameterError : public ConfigError {
public:
    ParameterError(std::string field, const std::string& what)
        : ConfigError(field + ": " + what), field_(std::move(field)) {}

    [[nodiscard]] const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

/// Physically meaningful request that has no answer in the model
/// (no steady state, unphysical covariance, ...). CLI exit code 2.
class DomainError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidStateError : public DomainError {
public:
    using DomainError::DomainError;
};

class NotPureError : public DomainError {
public:
    NotPureError(double det, const std::string& what) : DomainError(what), det_(det) {}
    [[nodiscard]] double det() const noexcept { return det_; }

private:
    double det_;
};

class NoSteadyStateError : public DomainError {
public:
    using DomainError::DomainError;
};

class IntegrationError : public DomainError {
public:
    IntegrationError(double time, const std::string& what) : DomainError(what), time_(time) {}
    [[nodiscard]] double time() const noexcept { return time_; }

private:
    double time_;
};

class DegeneratePovmError : public DomainError {
public:
    using DomainError::DomainError;
};

}  // namespace fundiff
