#pragma once

#include <stdexcept>

namespace otm {

// Root of the library's failure hierarchy.  Callers may catch the precise
// condition or the whole family; everything below carries a message.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A matrix required to be Hermitian is not (within tolerance), or holds
// non-finite entries.
struct NotHermitian : Error { using Error::Error; };

// The eigensolver failed to converge within its iteration cap.
struct NoConvergence : Error { using Error::Error; };

// A tensor product would exceed the configured dimension cap.
struct DimensionOverflow : Error { using Error::Error; };

// Operands or state vectors have incompatible dimensions.
struct DimensionMismatch : Error { using Error::Error; };

// The operation is defined only for the default (energy-eigenbasis) mode.
struct BasisNotSupported : Error { using Error::Error; };

// A backward probability underflowed to exact zero while the matched
// forward probability is nonzero; the per-trajectory ratio is undefined.
struct DegenerateDistribution : Error { using Error::Error; };

// rho carries weight outside sigma's support; relative entropy diverges.
struct SupportMismatch : Error { using Error::Error; };

// A denominator is numerically indistinguishable from zero.
struct DivisionNearZero : Error { using Error::Error; };

// A noise probability lies outside [0, 1] or is non-finite.
struct InvalidNoise : Error { using Error::Error; };

// Pauli decomposition needs a 2^n-dimensional square matrix.
struct NotPowerOfTwoDim : Error { using Error::Error; };

}  // namespace otm
