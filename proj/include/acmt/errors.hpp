#pragma once

#include <stdexcept>
#include <string>

namespace acmt {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// A documented precondition of an operation was violated by the caller.
class ContractViolation : public Error {
public:
    explicit ContractViolation(const std::string& msg) : Error(msg) {}
};

/// Expression text could not be parsed. Carries the byte offset of the
/// first offending character.
class ParseError : public Error {
public:
    ParseError(const std::string& msg, std::size_t offset)
        : Error(msg + " (at byte " + std::to_string(offset) + ")"), offset_(offset) {}
    std::size_t offset() const { return offset_; }

private:
    std::size_t offset_;
};

/// A finite-difference stencil left the model domain, or the frame became
/// singular at a stencil point.
class StencilError : public Error {
public:
    explicit StencilError(const std::string& msg) : Error(msg) {}
};

/// An almost contact metric structure failed its defining equations.
class ValidationError : public Error {
public:
    explicit ValidationError(const std::string& msg) : Error(msg) {}
};

} // namespace acmt
