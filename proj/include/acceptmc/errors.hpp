#pragma once

#include <stdexcept>
#include <string>

namespace acceptmc {

/// Bad or inconsistent configuration (file contents, parameter ranges).
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Operation requires a different scenario kind (e.g. exact enumeration on
/// a continuous-driver model).
struct UnsupportedKindError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Requested a tilted measure whose normalizer is zero.
struct ZeroMeasureError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A condition backing the uniform error certificate was violated
/// (rejection envelope breached, bank/plan mismatch, stale bank).
struct CertificationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// No evaluation route available for a conditional-expectation weight.
struct MissingEvaluatorError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A holding violated its trading bounds; carries the offending period.
struct ConstraintError : std::runtime_error {
    ConstraintError(const std::string& what, int period)
        : std::runtime_error(what), t(period) {}
    int t;
};

}  // namespace acceptmc
