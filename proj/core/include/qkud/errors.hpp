#pragma once

#include <stdexcept>
#include <string>

namespace qkud {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// hamiltonian module
struct MalformedLine : Error { using Error::Error; };
struct InconsistentWordLength : Error { using Error::Error; };
struct EmptyHamiltonian : Error { using Error::Error; };
struct DimensionTooLarge : Error { using Error::Error; };
struct NotHermitian : Error { using Error::Error; };
struct DimensionMismatch : Error { using Error::Error; };

// geneig module
struct NotPSD : Error { using Error::Error; };
struct EmptyRetainedSubspace : Error { using Error::Error; };
struct ConvergenceFailure : Error { using Error::Error; };

// krylov module
struct NonHermitianHamiltonian : Error { using Error::Error; };
struct ZeroInitialState : Error { using Error::Error; };
struct GevpFailure : Error { using Error::Error; };

// lcu_expansion module
struct MissingPrimitive : Error { using Error::Error; };
struct PrecisionLoss : Error { using Error::Error; };

struct InvalidArgument : Error { using Error::Error; };

} // namespace qkud
