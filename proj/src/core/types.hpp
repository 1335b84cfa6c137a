#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace xarjudge {

/// How the judge is asked to evaluate the candidate explanations of a window:
/// pick the single best option, or give each option a 1-5 score.
enum class Strategy {
    BestAmongK,
    LikertScoring,
};

const char* strategy_name(Strategy s);
Strategy strategy_from_name(std::string_view name);

/// A semantic sensor occurrence inside a window, e.g. "fridge opened" 2.5 s
/// after the window started.
struct HighLevelEvent {
    std::string name;
    double offset_seconds = 0.0;

    bool operator==(const HighLevelEvent&) const = default;
};

/// A fixed-duration slice of the smart-home event stream together with the
/// activity the recognition models predicted for it. Events are ordered by
/// offset and may be empty.
struct EventWindow {
    std::string window_id;
    double duration_seconds = 0.0;
    std::string predicted_activity;
    std::vector<HighLevelEvent> events;

    bool operator==(const EventWindow&) const = default;
};

/// One model's natural-language explanation of the window's prediction.
struct ExplanationCandidate {
    std::string model_id;
    std::string text;

    bool operator==(const ExplanationCandidate&) const = default;
};

/// A window plus exactly one explanation per roster model. All candidates
/// explain the same predicted activity by construction: the activity lives on
/// the window, not on the candidates.
struct WindowCase {
    EventWindow window;
    std::vector<ExplanationCandidate> candidates;

    bool operator==(const WindowCase&) const = default;
};

/// The competing models and the activity vocabulary they predict over.
/// Activities and events are open text labels, not a fixed enumeration, so
/// pools from different datasets can be loaded without code changes.
struct ModelRoster {
    std::vector<std::string> model_ids;
    std::vector<std::string> activity_set;

    bool contains_model(std::string_view id) const;
    bool contains_activity(std::string_view activity) const;

    bool operator==(const ModelRoster&) const = default;
};

/// The full evaluation input: the roster and the pool of window cases the
/// judge will walk.
struct EvaluationPool {
    ModelRoster roster;
    std::vector<WindowCase> cases;

    bool operator==(const EvaluationPool&) const = default;
};

/// Human-survey baseline: per-model scores already normalized into [0,1].
struct SurveyBenchmark {
    std::string dataset_name;
    int participant_count = 0;
    std::map<std::string, double> scores;

    bool operator==(const SurveyBenchmark&) const = default;
};

} // namespace xarjudge
