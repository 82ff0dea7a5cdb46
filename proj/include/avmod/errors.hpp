#pragma once

#include <stdexcept>
#include <string>

namespace avmod {

/// Base class for every error this library throws on bad mathematical input.
struct AvError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Operands belong to different rings, charts, or truncation orders.
struct SpecMismatch : AvError {
    using AvError::AvError;
};

/// Jet truncation orders of two operands disagree.
struct TruncationMismatch : AvError {
    using AvError::AvError;
};

/// A jet generator of the wrong degree was passed where a specific degree is
/// required (e.g. the matrix picture only covers degree zero).
struct DegreeError : AvError {
    using AvError::AvError;
};

/// Weight vector rejected: wrong length, not dominant, or no singular vector.
struct InvalidWeight : AvError {
    using AvError::AvError;
};

/// Transition functions for this coefficient system need non-integer powers
/// of the Jacobian determinant.
struct NotIntegrable : AvError {
    using AvError::AvError;
};

/// A Casimir operator failed to act by a scalar, so the representation has no
/// central character.
struct NotScalar : AvError {
    using AvError::AvError;
};

/// The requested chart pair has no transition in the atlas.
struct NoOverlap : AvError {
    using AvError::AvError;
};

/// Declared module structure is inconsistent on an ideal syzygy; the message
/// carries the offending relation and both evaluations.
struct SyzygyViolation : AvError {
    using AvError::AvError;
};

/// Operation needs a free finite-rank carrier and the module has none.
struct NotFree : AvError {
    using AvError::AvError;
};

/// Localization needs a finite differentiability order and none was found.
struct UnknownDifferentiability : AvError {
    using AvError::AvError;
};

/// A growth computation was asked to exceed its configured window.
struct WindowTooSmall : AvError {
    using AvError::AvError;
};

/// An expression in one of the CLI mini-languages failed to parse.  The
/// message ends with "at position N" (0-based offset into the input).
struct ParseError : AvError {
    ParseError(const std::string& what, std::size_t position)
        : AvError(what + " at position " + std::to_string(position)),
          position(position) {}
    std::size_t position;
};

}  // namespace avmod
