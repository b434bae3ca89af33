#pragma once

#include <stdexcept>
#include <string>

namespace matrange {

// Base class for all typed errors thrown by this library.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Shape of an argument is incompatible with the operation.
struct DimensionMismatch : Error {
    explicit DimensionMismatch(const std::string& msg) : Error(msg) {}
};

// Result of a product would exceed the configured size cap.
struct DimensionOverflow : Error {
    explicit DimensionOverflow(const std::string& msg) : Error(msg) {}
};

// A matrix that must be Hermitian is not, beyond tolerance.
struct NonHermitianInput : Error {
    explicit NonHermitianInput(const std::string& msg) : Error(msg) {}
};

// Iterative eigensolver failed to reach its convergence target.
struct NoConvergence : Error {
    explicit NoConvergence(const std::string& msg) : Error(msg) {}
};

// A scalar argument is outside the documented domain.
struct DomainError : Error {
    explicit DomainError(const std::string& msg) : Error(msg) {}
};

// File or JSON input/output failed (missing file, bad schema, NaN/Inf).
struct IoError : Error {
    explicit IoError(const std::string& msg) : Error(msg) {}
};

// A sampler kind that requires even dimension was asked for odd size
// without the documented fallback being applicable.
struct OddDimension : Error {
    explicit OddDimension(const std::string& msg) : Error(msg) {}
};

// Rejection sampler accepted fewer than the documented fraction of draws.
struct SamplerStarvation : Error {
    explicit SamplerStarvation(const std::string& msg) : Error(msg) {}
};

// Input to a boundary-only construction does not satisfy BB*+B*B = I.
struct NotOnBoundary : Error {
    explicit NotOnBoundary(const std::string& msg) : Error(msg) {}
};

// Eigenvalue clusters cannot be separated at the documented gap.
struct ClusteringAmbiguity : Error {
    explicit ClusteringAmbiguity(const std::string& msg) : Error(msg) {}
};

// Input violates the contraction criterion required by a construction.
struct CriterionViolated : Error {
    explicit CriterionViolated(const std::string& msg) : Error(msg) {}
};

// An assembled construction missed its residual tolerance after all
// documented sign choices; indicates a bug, not a data condition.
struct ConstructionResidual : Error {
    explicit ConstructionResidual(const std::string& msg) : Error(msg) {}
};

// Input violates the constraint-body membership precondition.
struct ConstraintViolated : Error {
    explicit ConstraintViolated(const std::string& msg) : Error(msg) {}
};

// Witness construction found an empty null space: the point was extreme
// and the request contradicts the classification.
struct WitnessFailure : Error {
    explicit WitnessFailure(const std::string& msg) : Error(msg) {}
};

// Numerical-radius precondition of a certificate search fails.
struct RadiusExceeded : Error {
    explicit RadiusExceeded(const std::string& msg) : Error(msg) {}
};

// A probe was requested on an input that fails its entry criterion,
// making the probe vacuous.
struct PreconditionVacuous : Error {
    explicit PreconditionVacuous(const std::string& msg) : Error(msg) {}
};

} // namespace matrange
