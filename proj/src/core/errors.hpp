#pragma once

#include <stdexcept>
#include <string>

namespace xarjudge {

/// Every failure the library can report. The C API and the CLI map these
/// onto coarser status / exit codes; tests assert on the exact value.
enum class ErrorCode {
    // file and document handling
    FileNotFound,
    IoFailure,
    MalformedDocument,
    SchemaViolation,
    InvariantViolation,

    // arguments and templates
    InvalidArgument,
    InvalidQualityOrder,
    TemplateMissingPlaceholder,

    // judge gateway
    BackendUnavailable,
    AuthFailure,
    EmptyCompletion,
    UnknownModel,

    // verdict parsing
    MissingFinalLine,
    UnknownLabel,
    IncompleteScores,
    OutOfRangeScore,
    StrategyMismatch,

    // scoring
    LabelNotFound,
    RosterMismatch,
    OutOfRangeTotal,
    EmptyPool,

    // benchmark comparison
    ModelSetMismatch,
    NotSamePermutationDomain,
    TooFewItems,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

} // namespace xarjudge
