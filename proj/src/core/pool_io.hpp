#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "core/compare.hpp"
#include "core/judge.hpp"
#include "core/scoring.hpp"
#include "core/types.hpp"

namespace xarjudge {

/// Pool, survey, oracle and report documents are UTF-8 JSON. Decoding is
/// strict: unknown fields are rejected so schema typos surface immediately.

/// Loads a pool and requires it to pass validation.
EvaluationPool load_pool(const std::string& path);

/// Loads a pool checking syntax and schema only. Meant for the `validate`
/// command, which wants to report invariant violations rather than fail.
EvaluationPool load_pool_lenient(const std::string& path);

EvaluationPool pool_from_json(const std::string& json_text, bool check_invariants = true);
std::string pool_to_json(const EvaluationPool& pool);
void save_pool(const EvaluationPool& pool, const std::string& path);

SurveyBenchmark load_survey(const std::string& path);
SurveyBenchmark survey_from_json(const std::string& json_text);

QualityOracle load_oracle(const std::string& path);
QualityOracle oracle_from_json(const std::string& json_text);
std::string oracle_to_json(const QualityOracle& oracle);

/// Serializes a finalized board (and optionally its survey comparison) into
/// the report document. save then load yields an equal board.
std::string report_to_json(const ScoreBoard& board, const ComparisonReport* comparison);
void save_report(const ScoreBoard& board, const ComparisonReport* comparison,
                 const std::string& path);
ScoreBoard load_report(const std::string& path,
                       std::optional<ComparisonReport>* comparison = nullptr);
ScoreBoard report_from_json(const std::string& json_text,
                            std::optional<ComparisonReport>* comparison = nullptr);

struct SynthResult {
    EvaluationPool pool;
    QualityOracle oracle;
};

/// Generates an activity-balanced pool: per_activity windows for every
/// activity in the roster, each with template explanations whose specificity
/// drops tier by tier along quality_order (relevant events, partially
/// relevant, irrelevant). Models falling in the same tier share their text,
/// which exercises the duplicate-explanation path downstream. Deterministic
/// for a fixed seed. quality_order must be a permutation of the roster ids.
SynthResult generate_synthetic_pool(const ModelRoster& roster, int per_activity,
                                    std::uint64_t seed,
                                    const std::vector<std::string>& quality_order);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

} // namespace xarjudge
