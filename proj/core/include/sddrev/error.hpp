#pragma once

#include <stdexcept>
#include <string>

namespace sddrev {

// Base of every domain error raised by the library. The CLI maps these to
// exit code 1.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Caller supplied something outside an operation's contract.
class InputError : public Error {
public:
    using Error::Error;
};

// Malformed text in one of the supported file formats.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line)
        : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

// Problem too large for an exhaustive or bounded procedure.
class CapacityError : public Error {
public:
    using Error::Error;
};

// A structural invariant of a diagram does not hold.
class InvariantError : public Error {
public:
    using Error::Error;
};

// Revision with new information that has no models.
class UnsatisfiableError : public Error {
public:
    using Error::Error;
};

// A manager deadline passed during a long operation.
class TimeoutError : public Error {
public:
    using Error::Error;
};

}  // namespace sddrev
