#pragma once

#include <stdexcept>
#include <string>

namespace strichlab {

/// A computed result violates a documented contract (monotonicity, tolerance,
/// sign).  The CLI maps this to exit status 2.
struct ContractViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Jacobian of an implicit map lost rank on (or near) its zero set.
struct DegenerateGeometry : ContractViolation {
    using ContractViolation::ContractViolation;
};

/// A refinement sequence failed to settle.
struct NonConvergence : ContractViolation {
    using ContractViolation::ContractViolation;
};

/// Truncation tail could not be certified below the requested tolerance.
struct TailBoundExceeded : ContractViolation {
    using ContractViolation::ContractViolation;
};

/// Evaluation point too close to a singular locus.
struct SingularProximity : std::domain_error {
    using std::domain_error::domain_error;
};

}  // namespace strichlab
