#ifndef MUDR_ERROR_HPP
#define MUDR_ERROR_HPP

#include <stdexcept>
#include <string>
#include <utility>

namespace mudr {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Scenario file could not be read or is not valid JSON / lacks a key.
class ParseError : public Error {
public:
    using Error::Error;
};

/// A field holds a value outside its admissible range.
class ValidationError : public Error {
public:
    ValidationError(std::string field, const std::string& what)
        : Error(field + ": " + what), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

/// A bound was asked for on a link whose radar return carries no power.
class DegenerateLinkError : public Error {
public:
    using Error::Error;
};

/// Operation defined for one target only was given several.
class MultiTargetError : public Error {
public:
    using Error::Error;
};

/// Input violates the operating regime an operation is valid in.
class PreconditionError : public Error {
public:
    using Error::Error;
};

} // namespace mudr

#endif // MUDR_ERROR_HPP
