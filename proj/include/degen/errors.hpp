#pragma once

#include <stdexcept>
#include <string>

namespace degen {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A parameter lies outside the domain of the operation it feeds.
class ParameterError : public Error {
public:
    using Error::Error;
};

/// An iterative numerical procedure did not reach its target accuracy.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, double achieved_error);
    double achieved_error() const noexcept { return achieved_; }

private:
    double achieved_;
};

/// A truncated integral keeps growing as the truncation point moves out.
class DivergenceError : public ConvergenceError {
public:
    using ConvergenceError::ConvergenceError;
};

/// The sampling grid cannot separate adjacent features (zeros, oscillations).
class ResolutionError : public Error {
public:
    using Error::Error;
};

/// The profile has no finite asymptotic value for a requested limit.
class UnsupportedLimitError : public Error {
public:
    using Error::Error;
};

} // namespace degen
