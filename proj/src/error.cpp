#include "nlosc/error.hpp"

namespace nlosc {

const char* to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::InvalidSpec: return "invalid-spec";
        case ErrorKind::Parse: return "parse";
        case ErrorKind::Domain: return "domain";
        case ErrorKind::Pole: return "pole";
        case ErrorKind::Overflow: return "overflow";
        case ErrorKind::NonConvergence: return "non-convergence";
        case ErrorKind::Unsupported: return "unsupported";
        case ErrorKind::GridExhausted: return "grid-exhausted";
        case ErrorKind::ZeroNorm: return "zero-norm";
        case ErrorKind::NotNormalized: return "not-normalized";
        case ErrorKind::IncompatibleDomain: return "incompatible-domain";
        case ErrorKind::Truncation: return "truncation";
        case ErrorKind::UnphysicalCovariance: return "unphysical-covariance";
        case ErrorKind::SingularCovariance: return "singular-covariance";
        case ErrorKind::GuardViolation: return "guard-violation";
        case ErrorKind::TailViolation: return "tail-violation";
    }
    return "unknown";
}

}  // namespace nlosc
