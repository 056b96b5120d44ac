#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mingain {

enum class ErrorCode {
    InvalidFrame,
    UnknownLabel,
    FrameMismatch,
    EmptySetMass,
    NegativeMass,
    MassSumViolation,
    DuplicateFocal,
    InvalidRelation,
    InvalidProbability,
    ZeroTotalMass,
    DimensionMismatch,
    InconsistentConditional,
    IncompleteConditionals,
    NotFeasible,
    NoConvergence,
    TooLarge,
    TotalConflict,
    ConflictDetected,
    ParseError,
};

std::string_view to_string(ErrorCode code);

// Every failure raised by the library carries a machine-readable code so the
// CLI can map it onto exit statuses and tests can match on it.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace mingain
