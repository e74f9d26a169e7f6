#include "mutsel/error.hpp"

namespace mutsel {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::InvalidDomain: return "InvalidDomain";
        case ErrorCode::UnknownSpec: return "UnknownSpec";
        case ErrorCode::LengthMismatch: return "LengthMismatch";
        case ErrorCode::NotElliptic: return "NotElliptic";
        case ErrorCode::SingularSystem: return "SingularSystem";
        case ErrorCode::NoConvergence: return "NoConvergence";
        case ErrorCode::NotPositiveWeight: return "NotPositiveWeight";
        case ErrorCode::DegenerateGap: return "DegenerateGap";
        case ErrorCode::NonFiniteState: return "NonFiniteState";
        case ErrorCode::BlowUp: return "BlowUp";
        case ErrorCode::NotPositiveReference: return "NotPositiveReference";
        case ErrorCode::DegenerateState: return "DegenerateState";
        case ErrorCode::NotStationaryReference: return "NotStationaryReference";
        case ErrorCode::ZeroReference: return "ZeroReference";
        case ErrorCode::UnsupportedExponent: return "UnsupportedExponent";
        case ErrorCode::NoPositiveSteadyState: return "NoPositiveSteadyState";
        case ErrorCode::ContinuationStall: return "ContinuationStall";
        case ErrorCode::InvalidKernel: return "InvalidKernel";
        case ErrorCode::ConfigError: return "ConfigError";
        case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

}  // namespace mutsel
