#pragma once

#include <stdexcept>
#include <string>

namespace twoq {

/// Base class for all library errors. Message strings carry the measured
/// residual that triggered the failure so callers can log or rethrow.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct NotHermitian : Error {
    using Error::Error;
};
struct NoConvergence : Error {
    using Error::Error;
};
struct SpectrumNotReal : Error {
    using Error::Error;
};

struct ComplexResidual : Error {
    using Error::Error;
};
struct DegeneratePivot : Error {
    using Error::Error;
};

struct TraceNotOne : Error {
    using Error::Error;
};
struct NotPSD : Error {
    using Error::Error;
};
struct InvalidParams : Error {
    using Error::Error;
};
struct NegativeRadicand : Error {
    using Error::Error;
};
struct CanonicalizationResidual : Error {
    using Error::Error;
};
struct RejectionExhausted : Error {
    using Error::Error;
};

struct NegativeEigenvalue : Error {
    using Error::Error;
};
struct OutOfRange : Error {
    using Error::Error;
};

struct CriteriaDisagreement : Error {
    using Error::Error;
};

struct UnknownCheck : Error {
    using Error::Error;
};
struct BoundaryExcess : Error {
    using Error::Error;
};

struct ParseError : Error {
    using Error::Error;
};

} // namespace twoq
