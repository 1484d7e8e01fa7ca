#pragma once

#include <stdexcept>
#include <string>

namespace fgcalc {

enum class ErrorKind {
    Domain,
    DivisionByZero,
    ZeroDenominator,
    MaxTermsExceeded,
    Divergent,
    PoleInLowerParams,
    WindowTooSmall,
    OutOfRange,
    MissingParameter,
    CoincidentNodes,
    PoleAtEvalPoint,
    ZeroDifference,
    NumericalInstability,
    DomainViolation,
    Usage,
};

inline const char* kind_name(ErrorKind k) {
    switch (k) {
        case ErrorKind::Domain: return "DomainError";
        case ErrorKind::DivisionByZero: return "DivisionByZero";
        case ErrorKind::ZeroDenominator: return "ZeroDenominator";
        case ErrorKind::MaxTermsExceeded: return "MaxTermsExceeded";
        case ErrorKind::Divergent: return "Divergent";
        case ErrorKind::PoleInLowerParams: return "PoleInLowerParams";
        case ErrorKind::WindowTooSmall: return "WindowTooSmall";
        case ErrorKind::OutOfRange: return "OutOfRange";
        case ErrorKind::MissingParameter: return "MissingParameter";
        case ErrorKind::CoincidentNodes: return "CoincidentNodes";
        case ErrorKind::PoleAtEvalPoint: return "PoleAtEvalPoint";
        case ErrorKind::ZeroDifference: return "ZeroDifference";
        case ErrorKind::NumericalInstability: return "NumericalInstability";
        case ErrorKind::DomainViolation: return "DomainViolation";
        case ErrorKind::Usage: return "UsageError";
    }
    return "Error";
}

class FgError : public std::runtime_error {
public:
    FgError(ErrorKind kind, const std::string& msg)
        : std::runtime_error(std::string(kind_name(kind)) + ": " + msg), kind_(kind) {}
    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

// Carries the offending index pair, e.g. g(b_i, b_k) = 0.
class ZeroDenominatorError : public FgError {
public:
    ZeroDenominatorError(const std::string& what, int i, int k)
        : FgError(ErrorKind::ZeroDenominator,
                  what + " vanishes at (i,k)=(" + std::to_string(i) + "," + std::to_string(k) + ")"),
          i_(i), k_(k) {}
    int i() const { return i_; }
    int k() const { return k_; }

private:
    int i_, k_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& msg) { throw FgError(kind, msg); }

}  // namespace fgcalc
