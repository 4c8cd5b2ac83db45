#pragma once

#include <stdexcept>
#include <string>

namespace hallab {

// Base for all library errors. Configuration/usage mistakes and failed
// mathematical preconditions both derive from this; identity verification
// failures are reported as data, never thrown.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct PoleAtPoint : Error { using Error::Error; };
struct HoldoutMismatch : Error { using Error::Error; };
struct NotRegular : Error { using Error::Error; };
struct OutOfWindow : Error { using Error::Error; };
struct NonUnitConstantTerm : Error { using Error::Error; };
struct BadConstantTerm : Error { using Error::Error; };
struct NoCertificate : Error { using Error::Error; };
struct ZeroClass : Error { using Error::Error; };
struct DegreeMismatch : Error { using Error::Error; };
struct DegreeOutOfBounds : Error { using Error::Error; };
struct NoFramingObject : Error { using Error::Error; };
struct NoTorsionCut : Error { using Error::Error; };
struct NoDuality : Error { using Error::Error; };
struct ModelMismatch : Error { using Error::Error; };
struct ModelLoadError : Error { using Error::Error; };
struct NonCommutativeTarget : Error { using Error::Error; };
struct CommutatorNotDivisible : Error { using Error::Error; };
struct SymmetryViolation : Error { using Error::Error; };
struct InsufficientTruncation : Error { using Error::Error; };
struct ZeroObject : Error { using Error::Error; };
struct ConfigError : Error { using Error::Error; };

} // namespace hallab
