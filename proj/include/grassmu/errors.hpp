#pragma once

#include <stdexcept>
#include <string>

namespace grassmu {

// Input frame does not have full row rank at the working tolerance.
struct DegenerateFrameError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A rank decision fell inside the tolerance band, so the cell of the
// input cannot be determined reliably.
struct IllConditionedClassification : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// An intersection exists but is not transverse at the working tolerance.
struct TransversalityFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A finite-difference stencil would sample outside the connection domain.
struct StencilOutOfDomain : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Reported limit data contradicts the bubbling trichotomy.
struct InconsistentLimitError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A requested computation exceeds the configured size cap.
struct ResourceLimitError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Caller violated a documented precondition.
struct PreconditionViolation : std::logic_error {
  using std::logic_error::logic_error;
};

// Malformed text or JSON input; the message names the offending field.
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace grassmu
