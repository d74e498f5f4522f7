#pragma once

#include <stdexcept>
#include <string>

namespace w2interp {

// Numerical failures carry enough context to identify the offending
// configuration; callers map them to exit codes or test failures.

struct RootCountMismatch final : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NoConvergence final : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DerivativeVanishes final : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SingularSystem final : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SingularBoundarySystem final : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConstraintViolation final : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct GridMismatch final : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Internal consistency check failed (palindromy, residual bound,
// imaginary residue). Signals a construction bug, not bad input.
struct InvariantViolation final : std::logic_error {
    using std::logic_error::logic_error;
};

}  // namespace w2interp
