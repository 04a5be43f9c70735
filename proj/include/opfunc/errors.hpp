#pragma once

#include <stdexcept>
#include <string>

namespace opfunc {

/// Base class of every error raised by this library.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// A function was evaluated outside its natural domain (1/0, log of a
/// non-positive number, tan at a pole, fractional power of a negative base).
struct DomainError : Error {
    using Error::Error;
};

/// A matrix eigenvalue fell outside the interval required by an operation.
struct SpectrumError : Error {
    using Error::Error;
};

/// A resolvent factor was numerically singular (condition number too large).
struct SingularError : Error {
    using Error::Error;
};

/// Malformed function or interval text.
struct ParseError : Error {
    std::size_t position;
    ParseError(const std::string& msg, std::size_t pos)
        : Error(msg + " (at position " + std::to_string(pos) + ")"), position(pos) {}
};

/// An integral-representation object violated one of its invariants.
struct InvalidRepr : Error {
    using Error::Error;
};

/// Adaptive quadrature failed to reach the requested tolerance.
struct QuadratureError : Error {
    using Error::Error;
};

/// The retreat parameter exhausted an interval; no grid can be placed.
struct EmptyCoreError : Error {
    using Error::Error;
};

/// A documented hypothesis of a transform or construction was not met.
struct PreconditionError : Error {
    using Error::Error;
};

/// No admissible shift exists for a backward construction step.
struct InfeasibleError : Error {
    using Error::Error;
};

/// Two consecutive construction points hit the same interval endpoint.
struct EndpointRepetitionError : Error {
    using Error::Error;
};

/// A transform that requires a non-zero function received (numerically) zero.
struct ZeroFunctionError : Error {
    using Error::Error;
};

/// A one-sided limit needed by a transform does not exist / is infinite.
struct DivergentLimitError : Error {
    using Error::Error;
};

}  // namespace opfunc
