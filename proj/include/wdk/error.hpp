#pragma once

#include <stdexcept>
#include <string>

namespace wdk {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Arithmetic outside O: non-integral quotients, foreign backends, bad literals.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Vector lengths that disagree with the instance (n, g).
class DimensionError : public Error {
public:
    using Error::Error;
};

/// A point handed to a formula outside the stratum the formula is stated for.
class StratumError : public Error {
public:
    using Error::Error;
};

/// Caller-side contract violations (flags not declared, bad bounds, ...).
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// A closed-form length disagreed with the Smith-normal-form oracle.
class OracleMismatch : public Error {
public:
    using Error::Error;
};

/// Text input that could not be understood. `line()` is 0 when not line-bound.
class ParseError : public Error {
public:
    ParseError(const std::string& what, int line = 0)
        : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

    int line() const noexcept { return line_; }

private:
    int line_;
};

} // namespace wdk
