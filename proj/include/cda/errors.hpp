#pragma once
#include <stdexcept>
#include <string>

namespace cda {

// Base for all artifact-specific failures so callers can catch one type.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Input violates a documented precondition (bad geometry, bad grid, ...).
struct DomainError : Error {
    using Error::Error;
};

// Caller handed a value that breaks a stated contract (e.g. a non-symmetric
// matrix to the symmetric eigensolver).
struct ContractViolation : Error {
    using Error::Error;
};

// Richardson/damping extrapolation did not reach the requested tolerance.
struct ConvergenceFailure : Error {
    using Error::Error;
};

// A diffraction order sits numerically on its threshold (kappa_m -> 0);
// the physical quantities diverge there and no finite value is meaningful.
struct ThresholdDegeneracy : Error {
    using Error::Error;
};

// Independent evaluations of the same quantity disagree beyond tolerance
// (e.g. real-space Gamma vs the closed form).
struct ConsistencyFailure : Error {
    using Error::Error;
};

// The effective-polarizability bracket is singular (lossless resonance of a
// non-radiating block).
struct SingularResponse : Error {
    using Error::Error;
};

// Operation called outside its validity regime (e.g. closed-form Gamma in the
// multi-order regime).
struct WrongRegime : Error {
    using Error::Error;
};

}  // namespace cda
