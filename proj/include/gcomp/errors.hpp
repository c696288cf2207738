#pragma once

#include <stdexcept>
#include <string>

namespace gcomp {

/// A requested geodesic left the truncated numerical domain.
struct TruncationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// The adaptive stepper could not make progress (step-size underflow
/// or step budget exhausted).
struct IntegrationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// The shooting solver found no bracket connecting the two points.
struct ConnectivityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A quadrature was requested across a turning point (m <= nu inside
/// the integration range).
struct BranchError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Improper integral failed to converge.
struct QuadratureError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// The curvature ordering K >= G fails somewhere on the horizon.
struct OrderingError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A scalar Jacobi solve blew past the overflow guard.
struct SolverError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// The requested side lengths admit no comparison triangle in the model.
struct TriangleNonexistence : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A comparison inequality that should hold by construction was violated
/// (bad inputs or an upstream curvature-bound violation).
struct ComparisonViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Curve shortening escaped the locally convex domain.
struct ConvexityViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace gcomp
