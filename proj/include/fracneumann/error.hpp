#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace fracneumann {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An argument violates a documented precondition.
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// An iterative method stopped before meeting its tolerance.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, std::vector<double> history)
        : Error(what), residual_history(std::move(history)) {}

    std::vector<double> residual_history;
};

}  // namespace fracneumann
