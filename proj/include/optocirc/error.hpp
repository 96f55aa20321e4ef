#pragma once

#include <stdexcept>
#include <string>

namespace optocirc {

// Failure categories. The CLI maps each one to its own exit code.
enum class ErrorKind {
    domain,
    iteration_failure,
    singular,
    configuration,
    io,
    truncation,
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

class DomainError : public Error {
public:
    explicit DomainError(const std::string& what) : Error(ErrorKind::domain, what) {}
};

class IterationError : public Error {
public:
    IterationError(const std::string& what, double last_residual)
        : Error(ErrorKind::iteration_failure, what), last_residual_(last_residual) {}

    double last_residual() const noexcept { return last_residual_; }

private:
    double last_residual_;
};

class SingularError : public Error {
public:
    explicit SingularError(const std::string& what) : Error(ErrorKind::singular, what) {}
};

class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& what) : Error(ErrorKind::configuration, what) {}
};

class IoError : public Error {
public:
    explicit IoError(const std::string& what) : Error(ErrorKind::io, what) {}
};

class TruncationError : public Error {
public:
    explicit TruncationError(const std::string& what) : Error(ErrorKind::truncation, what) {}
};

} // namespace optocirc
