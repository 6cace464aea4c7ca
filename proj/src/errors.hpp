#pragma once

#include <stdexcept>
#include <string>

namespace jlva {

// Root of the library's exception hierarchy. The C API maps each subclass to a
// status code, which the CLI turns into its exit code.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

class NumericError : public Error {
public:
    using Error::Error;
};

// A cumulant argument left the admissible exponential-moment strip.
class StripViolation : public NumericError {
public:
    using NumericError::NumericError;
};

class ValidationError : public Error {
public:
    using Error::Error;
};

}  // namespace jlva
