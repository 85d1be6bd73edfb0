#pragma once

#include <stdexcept>
#include <string>

namespace mesoheat {

/// Base for runtime failures of the numerics themselves (as opposed to bad
/// arguments, which throw std::invalid_argument). Each subclass carries a
/// stable code string used by the CLI to map failures to exit status 2.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
    virtual const char* code() const noexcept { return "NumericalError"; }
};

/// A retained Fourier mode has positive growth rate and the policy is Reject.
class IllPosedGrowth : public NumericalError {
public:
    using NumericalError::NumericalError;
    const char* code() const noexcept override { return "IllPosedGrowth"; }
};

/// Explicit step violates the diffusive stability bound r = D*dt/dx^2 <= 1/2.
class StabilityViolation : public NumericalError {
public:
    using NumericalError::NumericalError;
    const char* code() const noexcept override { return "StabilityViolation"; }
};

/// Second-order-in-time model with no initial rate and no closure selected.
class MissingInitialRate : public NumericalError {
public:
    using NumericalError::NumericalError;
    const char* code() const noexcept override { return "MissingInitialRate"; }
};

/// Front tracking never saw the threshold crossed outside the initial support.
class FrontNotDetected : public NumericalError {
public:
    using NumericalError::NumericalError;
    const char* code() const noexcept override { return "FrontNotDetected"; }
};

}  // namespace mesoheat
