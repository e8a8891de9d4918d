#pragma once

#include <stdexcept>
#include <string>

namespace feynpath {

// Precondition violations: bad parameters, caustics, unsupported input.
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Kernel evaluated at a focal point / caustic (omega*T = n*pi, H1 = 0).
class CausticError : public DomainError {
public:
    using DomainError::DomainError;
};

class TotalInternalReflection : public DomainError {
public:
    using DomainError::DomainError;
};

// Denominator of a response function vanishes.
class PoleError : public DomainError {
public:
    using DomainError::DomainError;
};

// Finite-field response is not linear in the applied field.
class FieldTooLargeError : public DomainError {
public:
    using DomainError::DomainError;
};

// A numerical procedure did not meet its tolerance.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class BlowUpError : public NumericalError {
public:
    BlowUpError(const std::string& what, double time)
        : NumericalError(what), time_(time) {}
    double time() const { return time_; }

private:
    double time_;
};

// Two independent evaluation backends disagree.
class InconsistencyError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

}  // namespace feynpath
