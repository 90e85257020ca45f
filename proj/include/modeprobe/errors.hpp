#pragma once

#include <stdexcept>
#include <string>

namespace modeprobe {

// Base class for all toolkit errors so callers can catch one type.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Doubling the node count changed a quadrature result beyond tolerance.
struct QuadratureUnconverged : Error {
    using Error::Error;
};

// A mode-space operation was asked to write outside the configured cutoff.
struct CutoffTooSmall : Error {
    using Error::Error;
};

// A nominally unitary evolution lost norm, i.e. the cutoff truncated the flow.
struct NormLeakage : Error {
    using Error::Error;
};

// Multipole order requested beyond the convergence-safe range.
struct OrderOverflow : Error {
    using Error::Error;
};

// Mie coefficient denominator vanished to working precision.
struct DegenerateDenominator : Error {
    using Error::Error;
};

// Homodyne local oscillator does not match the port's signal mode.
struct LOMismatch : Error {
    using Error::Error;
};

// Weak-value-amplified exponent too large for the truncated flow to be trusted.
struct AmplifiedFlowDiverged : Error {
    using Error::Error;
};

// Deformation outside the domain where the model is meaningful.
struct DeformationOutOfRange : Error {
    using Error::Error;
};

// Run configuration failed validation; message names the offending field.
struct ConfigInvalid : Error {
    using Error::Error;
};

// Filesystem I/O failed while reading config or writing results.
struct IOFailure : Error {
    using Error::Error;
};

}  // namespace modeprobe
