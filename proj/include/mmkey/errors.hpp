#pragma once

#include <stdexcept>

namespace mmkey {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A caller passed a value outside the documented domain (angle out of
// range, mismatched lengths, inverted intervals).
struct InputDomainError : Error { using Error::Error; };

// Bad or inconsistent configuration (unknown keys, empty codebooks).
struct ConfigError : Error { using Error::Error; };

// A weight vector that cannot be realized (all antennas off).
struct InfeasibleWeightError : Error { using Error::Error; };

// A scheme cannot produce a beam sequence under the given settings,
// e.g. no archive subset satisfies the size requirement.
struct SchemeInfeasibleError : Error { using Error::Error; };

// Phase of a zero-magnitude sample is undefined; the caller must
// regenerate its input.
struct UndefinedPhaseError : Error { using Error::Error; };

// Filesystem failures. Partial output files are removed before this
// is thrown.
struct IoError : Error { using Error::Error; };

} // namespace mmkey
