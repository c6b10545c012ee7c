#pragma once

#include <stdexcept>

namespace qlheat {

/// Base class of all errors thrown by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Invalid parameters or a violated operation precondition.
struct ValidationError : Error { using Error::Error; };

/// Malformed configuration document.
struct ParseError : Error { using Error::Error; };

/// Similarity ODE evaluated where |f'| is below the regularization floor;
/// the equation divides by f'^2 and is singular there.
struct DegenerateSlope : Error { using Error::Error; };

/// Profile integration requested with C = 0.
struct InvalidBoundary : Error { using Error::Error; };

/// Adaptive step size underflowed before any stopping event.
struct StepSizeCollapse : Error { using Error::Error; };

/// Profile stays positive and no stopping event fired; there is no front.
struct NoFront : Error { using Error::Error; };

struct NegativeTime : Error { using Error::Error; };
struct NonpositiveTime : Error { using Error::Error; };

/// Time step exceeds the explicit-scheme stability bound.
struct CflViolation : Error { using Error::Error; };

/// A solver state became non-finite.
struct NonFiniteState : Error { using Error::Error; };

/// Transformed lattice lies entirely outside the solved space-time window.
struct WindowExceeded : Error { using Error::Error; };

/// Requested time is not among a report's snapshot times.
struct MissingSnapshot : Error { using Error::Error; };

} // namespace qlheat
