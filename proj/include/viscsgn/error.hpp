#pragma once

#include <stdexcept>
#include <string>

namespace viscsgn {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A parameter or configuration value is outside its admissible range.
class InvalidArgument : public Error {
public:
    InvalidArgument(const std::string& field, const std::string& what)
        : Error(field + ": " + what), field_(field) {}

    const std::string& field() const { return field_; }

private:
    std::string field_;
};

/// The total water depth reached zero or became negative somewhere.
class DryStateError : public Error {
public:
    using Error::Error;
};

/// A linear solve broke down (zero pivot).
class SolverError : public Error {
public:
    using Error::Error;
};

}  // namespace viscsgn
