#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace tmcrf {

enum class ErrorCode {
    MalformedRecord,
    DuplicateId,
    UnknownResidue,
    ConfigConflict,
    InvalidConfig,
    EmptyTraining,
    MissingGold,
    NumericalFailure,
    InfeasibleTopology,
    InfeasiblePath,
    MalformedPair,
    EmptyAnalysis,
    IncompatibleModel,
    Io,
};

std::string_view error_name(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the codes above so the
/// command-line front end can map it onto an exit status.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what);

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }
    /// The message without the code prefix.
    [[nodiscard]] const std::string& detail() const noexcept { return detail_; }

private:
    ErrorCode code_;
    std::string detail_;
};

} // namespace tmcrf
