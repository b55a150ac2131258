#pragma once

#include <stdexcept>
#include <string>

namespace weingarten {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// c is outside the attainable range of W(m·1, 1) at the origin.
struct NoOriginRootError : Error {
    using Error::Error;
};

// origin launch requested on a family that is regular at s=0 (e.g. horospheres).
struct NonSingularFamilyError : Error {
    using Error::Error;
};

// the per-step slope equation W(..., x, θ²)=c has no root in [-B, B] up to B=1e12.
struct NoRootError : Error {
    using Error::Error;
};

// parameter outside its documented domain (s outside family interval, λ ≥ δ, ...).
struct OutOfRangeError : Error {
    using Error::Error;
};

// gluing requested at a junction whose boundary sample is not vertical (ρ < 1-1e-6).
struct TangencyMismatchError : Error {
    using Error::Error;
};

// c equals ε n(n-1): the construction degenerates to a horizontal hyperplane.
struct DegenerateHyperplaneError : Error {
    using Error::Error;
};

// user-supplied evaluator produced a NaN, or was evaluated where it is undefined.
struct EvaluatorError : Error {
    using Error::Error;
};

// adaptive integrator could not reach the requested tolerance.
struct QuadratureError : Error {
    using Error::Error;
};

// ODE step size underflowed (h < 1e-14·max(1,|s|)); message carries the last good state.
struct StepUnderflowError : Error {
    using Error::Error;
};

// malformed input file / JSON schema violation.
struct SchemaError : Error {
    using Error::Error;
};

// file could not be read or written.
struct IoError : Error {
    using Error::Error;
};

}  // namespace weingarten
