#pragma once

#include <stdexcept>
#include <string>

namespace jamcast {

// Base type for every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A scalar argument is outside its documented domain.
class DomainError : public Error {
public:
    using Error::Error;
};

// A record or config violates an invariant; the message names the field.
class ValidationError : public Error {
public:
    using Error::Error;
};

// Vector/series dimensions or lengths do not match.
class ShapeError : public Error {
public:
    using Error::Error;
};

// Not enough rows/samples to perform the operation.
class InsufficientDataError : public Error {
public:
    using Error::Error;
};

// Malformed text input (CSV row, JSON payload, model file, config file).
class ParseError : public Error {
public:
    using Error::Error;
};

// Config file is syntactically fine but unusable (unknown key, bad value).
class ConfigError : public Error {
public:
    using Error::Error;
};

// Solver did not reach the KKT tolerance within its iteration budget.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& msg, double best_kkt_violation)
        : Error(msg), best_kkt_violation_(best_kkt_violation) {}

    double best_kkt_violation() const noexcept { return best_kkt_violation_; }

private:
    double best_kkt_violation_;
};

// Every grid point failed during hyperparameter search.
class SearchFailedError : public Error {
public:
    using Error::Error;
};

// Periodogram has no positive power; no dominant period exists.
class NoDominantPeriodError : public Error {
public:
    using Error::Error;
};

// A provider request failed; the poll cycle may be retried later.
class IngestionError : public Error {
public:
    using Error::Error;
};

}  // namespace jamcast
