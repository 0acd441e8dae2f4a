#pragma once

#include <stdexcept>
#include <string>

namespace unirec {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Shapes or lengths of arguments do not fit together.
class DimensionError : public Error {
public:
    using Error::Error;
};

/// An argument lies outside the domain of an operation (non-unit vector,
/// malformed parameter set, n < 1, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// A matrix failed a unitarity gate. Carries the measured deviation.
class NotUnitaryError : public Error {
public:
    NotUnitaryError(const std::string& what, double deviation)
        : Error(what), deviation_(deviation) {}

    double deviation() const noexcept { return deviation_; }

private:
    double deviation_;
};

} // namespace unirec
