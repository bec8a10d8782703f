#pragma once

#include <stdexcept>
#include <string>

namespace platelab {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Inputs violate a documented precondition (parameter ranges, grid sizes,
/// malformed charts). The CLI maps this to exit status 2.
class InvalidInput : public Error {
public:
    using Error::Error;
};

/// A numerical procedure could not deliver its postcondition
/// (non-convergence, indefinite matrix, truncated spectrum). Exit status 3.
class SolverFailure : public Error {
public:
    using Error::Error;
};

/// Eigenvalue tracking across a perturbation could not re-identify a cluster.
class AmbiguousCluster : public SolverFailure {
public:
    using SolverFailure::SolverFailure;
};

}  // namespace platelab
