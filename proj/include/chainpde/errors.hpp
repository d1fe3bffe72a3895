#pragma once

#include <stdexcept>
#include <string>

namespace chainpde {

// Base class for everything this library throws on purpose.
struct ChainPdeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Two fields live on structurally different grids.
struct GridMismatchError : ChainPdeError {
    using ChainPdeError::ChainPdeError;
};

// An argument violates a documented precondition (node counts, time
// horizon, sample counts, system size caps, ...).
struct PreconditionError : ChainPdeError {
    using ChainPdeError::ChainPdeError;
};

// A potential was evaluated outside its declared validity interval.
struct PotentialDomainError : ChainPdeError {
    using ChainPdeError::ChainPdeError;
};

// Newton failed to reduce the residual or ran out of iterations.
struct NewtonDivergenceError : ChainPdeError {
    using ChainPdeError::ChainPdeError;
};

// The reaction coefficient handed to the parabolic solver has a
// negative entry.
struct NegativeZetaError : ChainPdeError {
    using ChainPdeError::ChainPdeError;
};

// Conjugate gradients stalled or met a non-positive curvature
// direction.
struct LinearSolveError : ChainPdeError {
    using ChainPdeError::ChainPdeError;
};

// Root bracketing for the scalar reduction failed.
struct BracketError : ChainPdeError {
    using ChainPdeError::ChainPdeError;
};

// Non-finite values, active safety clamps at a converged state, and
// similar floating-point trouble.
struct NumericError : ChainPdeError {
    using ChainPdeError::ChainPdeError;
};

// Unparseable or inconsistent run configuration.
struct ConfigError : ChainPdeError {
    using ChainPdeError::ChainPdeError;
};

// File system and file format problems.
struct FileError : ChainPdeError {
    using ChainPdeError::ChainPdeError;
};

} // namespace chainpde
