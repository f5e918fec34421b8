#pragma once

#include <stdexcept>
#include <string>

namespace clsaddle {

// Invalid physical or lattice input.
class ParamError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Failure of a numerical routine (singular matrix, unstable mode, broken identity).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class SingularMatrixError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class InstabilityError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

} // namespace clsaddle
