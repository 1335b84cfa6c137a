#include "core/errors.hpp"

namespace xarjudge {

const char* error_code_name(ErrorCode code) {
    switch (code) {
    case ErrorCode::FileNotFound: return "file_not_found";
    case ErrorCode::IoFailure: return "io_failure";
    case ErrorCode::MalformedDocument: return "malformed_document";
    case ErrorCode::SchemaViolation: return "schema_violation";
    case ErrorCode::InvariantViolation: return "invariant_violation";
    case ErrorCode::InvalidArgument: return "invalid_argument";
    case ErrorCode::InvalidQualityOrder: return "invalid_quality_order";
    case ErrorCode::TemplateMissingPlaceholder: return "template_missing_placeholder";
    case ErrorCode::BackendUnavailable: return "backend_unavailable";
    case ErrorCode::AuthFailure: return "auth_failure";
    case ErrorCode::EmptyCompletion: return "empty_completion";
    case ErrorCode::UnknownModel: return "unknown_model";
    case ErrorCode::MissingFinalLine: return "missing_final_line";
    case ErrorCode::UnknownLabel: return "unknown_label";
    case ErrorCode::IncompleteScores: return "incomplete_scores";
    case ErrorCode::OutOfRangeScore: return "out_of_range_score";
    case ErrorCode::StrategyMismatch: return "strategy_mismatch";
    case ErrorCode::LabelNotFound: return "label_not_found";
    case ErrorCode::RosterMismatch: return "roster_mismatch";
    case ErrorCode::OutOfRangeTotal: return "out_of_range_total";
    case ErrorCode::EmptyPool: return "empty_pool";
    case ErrorCode::ModelSetMismatch: return "model_set_mismatch";
    case ErrorCode::NotSamePermutationDomain: return "not_same_permutation_domain";
    case ErrorCode::TooFewItems: return "too_few_items";
    }
    return "unknown_error";
}

} // namespace xarjudge
