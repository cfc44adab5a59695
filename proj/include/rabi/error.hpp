// error.hpp - Exception types shared by every rabi module

#pragma once

#include <stdexcept>
#include <string>

namespace rabi {

// Base for every error raised by the library. Callers that only care about
// "the computation failed" catch this one.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Shapes of the operands do not fit the operation (or would overflow).
class DimensionError : public Error {
public:
    using Error::Error;
};

// A NaN or Inf was about to be stored, or an input axis was not finite.
class NonFiniteError : public Error {
public:
    using Error::Error;
};

class NotHermitianError : public Error {
public:
    NotHermitianError(const std::string& what, double asymmetry)
        : Error(what), asymmetry_(asymmetry) {}

    // max_{jk} |M[j][k] - conj(M[k][j])|
    double asymmetry() const noexcept { return asymmetry_; }

private:
    double asymmetry_;
};

class ConvergenceError : public Error {
public:
    using Error::Error;
};

// Malformed quantum state: bad norm, trace, positivity or subsystem layout.
class InvalidStateError : public Error {
public:
    using Error::Error;
};

// Model or sweep parameters outside their domain.
class InvalidParamsError : public Error {
public:
    using Error::Error;
};

// An output file could not be written.
class OutputError : public Error {
public:
    using Error::Error;
};

} // namespace rabi
