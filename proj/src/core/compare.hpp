#pragma once

#include <map>
#include <string>
#include <vector>

#include "core/scoring.hpp"
#include "core/types.hpp"

namespace xarjudge {

/// Agreement between the judge's ranking and a human survey's ranking.
/// Absolute deltas depend on the normalization chosen on both sides; the
/// rankings and tau are the meaningful signal.
struct ComparisonReport {
    double kendall_tau = 0.0; // in [-1, 1]
    bool exact_rank_match = false;
    std::map<std::string, double> per_model_delta; // llm normalized - survey normalized
    std::vector<std::string> llm_ranking;
    std::vector<std::string> survey_ranking;
    std::string dataset_name;
    int participant_count = 0;
    bool survey_tie = false; // survey ranking had score ties, broken by roster order

    bool operator==(const ComparisonReport&) const = default;
};

/// Orders the roster's models by score, descending; exact ties keep roster
/// order. `tie_flag`, when given, is set if any tie was broken that way.
std::vector<std::string> rank_models(const std::map<std::string, double>& scores,
                                     const ModelRoster& roster, bool* tie_flag = nullptr);

/// Kendall tau-a over two strict rankings of the same ids:
/// (concordant - discordant) / (n(n-1)/2) over all unordered pairs.
double kendall_tau(const std::vector<std::string>& ranking_a,
                   const std::vector<std::string>& ranking_b);

/// Compares a finalized board against a survey baseline covering the same
/// model ids. Throws ModelSetMismatch otherwise.
ComparisonReport compare(const ScoreBoard& board, const SurveyBenchmark& survey);

/// Human-readable report: per-model table, ranking, winner and, when present,
/// the comparison metrics. Formatting is stable so output can be golden-file
/// tested.
std::string render_report(const ScoreBoard& board, const ComparisonReport* comparison);

} // namespace xarjudge
