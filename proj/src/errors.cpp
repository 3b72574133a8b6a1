#include "tmcrf/errors.hpp"

namespace tmcrf {

std::string_view error_name(ErrorCode code) noexcept
{
    switch (code) {
    case ErrorCode::MalformedRecord: return "MalformedRecord";
    case ErrorCode::DuplicateId: return "DuplicateId";
    case ErrorCode::UnknownResidue: return "UnknownResidue";
    case ErrorCode::ConfigConflict: return "ConfigConflict";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::EmptyTraining: return "EmptyTraining";
    case ErrorCode::MissingGold: return "MissingGold";
    case ErrorCode::NumericalFailure: return "NumericalFailure";
    case ErrorCode::InfeasibleTopology: return "InfeasibleTopology";
    case ErrorCode::InfeasiblePath: return "InfeasiblePath";
    case ErrorCode::MalformedPair: return "MalformedPair";
    case ErrorCode::EmptyAnalysis: return "EmptyAnalysis";
    case ErrorCode::IncompatibleModel: return "IncompatibleModel";
    case ErrorCode::Io: return "Io";
    }
    return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(error_name(code)) + ": " + what)
    , code_(code)
    , detail_(what)
{}

} // namespace tmcrf
