#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "core/types.hpp"

namespace xarjudge {

/// Structured result extracted from a judge completion. `kind` mirrors the
/// strategy the completion answered: a chosen label for BestAmongK, a full
/// label-to-score map for LikertScoring. `reasoning` keeps the raw text.
struct JudgeVerdict {
    Strategy kind = Strategy::BestAmongK;
    std::string chosen_label;         // BestAmongK only
    std::map<std::string, int> scores; // LikertScoring only, values in 1..5
    std::string reasoning;

    bool same_decision(const JudgeVerdict& other) const {
        return kind == other.kind && chosen_label == other.chosen_label && scores == other.scores;
    }
};

/// Extracts the verdict from free-form chain-of-thought text. Only the last
/// occurrence of the strategy's final-line marker counts; everything before
/// it is reasoning. The score list is lexed tolerantly: ";" or "," between
/// entries, "=" or ":" between label and value, spaces optional.
///
/// Errors: MissingFinalLine, StrategyMismatch (the other strategy's marker is
/// present instead), UnknownLabel, IncompleteScores, OutOfRangeScore.
JudgeVerdict parse_verdict(std::string_view raw_text, Strategy strategy,
                           const std::vector<std::string>& expected_labels);

/// Renders the machine-readable final line for a verdict, in the exact shape
/// parse_verdict accepts: "FINAL: A" or "SCORES: A=5; B=3".
std::string render_final_line(const JudgeVerdict& verdict);

} // namespace xarjudge
