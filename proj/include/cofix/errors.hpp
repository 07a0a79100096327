#pragma once

#include <stdexcept>

namespace cofix {

// Base class for every failure the library reports by throwing.
struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A user-supplied callback produced an unusable value (NaN, negative distance, ...).
struct DiagnosticError : SolverError {
  using SolverError::SolverError;
};

// A parameter is outside its admissible range (e.g. contraction constant >= 1).
struct InvalidParameter : SolverError {
  using SolverError::SolverError;
};

// Every sampled pair had zero separation, so no contraction ratio can be formed.
struct DegenerateSample : SolverError {
  using SolverError::SolverError;
};

// A kernel denominator 1 - e^{tau T} vanishes (lambda1 == lambda2).
struct SingularKernel : SolverError {
  using SolverError::SolverError;
};

// A hypothesis required by a solve was checked and found violated.
struct PreconditionFailed : SolverError {
  using SolverError::SolverError;
};

}  // namespace cofix
