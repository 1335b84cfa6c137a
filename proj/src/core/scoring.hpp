#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "core/judge.hpp"
#include "core/prompt.hpp"
#include "core/types.hpp"
#include "core/verdict.hpp"

namespace xarjudge {

/// Per-window score vector: one value per roster model. BestAmongK vectors
/// are 0/1 with at least one 1; Likert vectors hold the 1..5 option scores.
struct ScoreVector {
    std::string window_id;
    std::map<std::string, int> values;

    bool operator==(const ScoreVector&) const = default;
};

/// Echo of the configuration that produced a board, embedded in reports so a
/// result can be traced back to the exact run setup.
struct RunFingerprint {
    Strategy strategy = Strategy::BestAmongK;
    std::string backend;
    std::string model_name;
    double temperature = 0.0;
    std::uint64_t seed = 0;
    int repetitions = 0;
    std::string template_hash;

    bool operator==(const RunFingerprint&) const = default;
};

/// One repetition's outcome. `pool_size` is the number of windows actually
/// scored; it only drops below the input pool size in skip-failed mode.
struct RepetitionResult {
    std::map<std::string, std::int64_t> raw;
    std::map<std::string, double> normalized;
    std::size_t pool_size = 0;
    std::vector<std::string> skipped_windows;

    bool operator==(const RepetitionResult&) const = default;
};

/// Accumulated result of an evaluation run: raw totals, normalized scores,
/// per-repetition values, mean / sample std across repetitions, the ranking
/// (best first) and the winner(s).
struct ScoreBoard {
    Strategy strategy = Strategy::BestAmongK;
    std::vector<std::string> model_ids; // roster order, used for tie breaking
    std::size_t pool_size = 0;

    std::map<std::string, std::int64_t> raw_totals; // first repetition
    std::map<std::string, double> normalized;       // mean over repetitions
    std::map<std::string, double> mean;
    std::map<std::string, double> stddev; // sample (n-1); 0 when n == 1
    std::vector<RepetitionResult> runs;

    std::vector<std::string> ranking;
    bool tie = false; // some ranking positions were decided by roster order
    std::vector<std::string> winners; // all co-leaders of the mean
    bool single_repetition = false;

    RunFingerprint fingerprint;

    bool operator==(const ScoreBoard&) const = default;
};

/// Scores one BestAmongK verdict: every contributor of the chosen option gets
/// 1, every other model 0.
ScoreVector score_best_among_k(const JudgeVerdict& verdict,
                               const std::vector<UniqueOption>& options,
                               const ModelRoster& roster);

/// Scores one Likert verdict: each model receives the score of the option it
/// contributed to, so duplicated explanations share their score.
ScoreVector score_likert(const JudgeVerdict& verdict, const std::vector<UniqueOption>& options,
                         const ModelRoster& roster);

/// Per-model sum over all vectors. Every vector must be keyed exactly by the
/// roster's model ids. Order independent.
std::map<std::string, std::int64_t> accumulate(const std::vector<ScoreVector>& vectors,
                                               const ModelRoster& roster);

/// Maps raw totals into [0,1]: BestAmongK totals become win fractions
/// (total / |P|), Likert totals are min-max scaled over the reachable range
/// ((total / |P| - 1) / 4).
std::map<std::string, double> normalize(const std::map<std::string, std::int64_t>& raw_totals,
                                        Strategy strategy, std::size_t pool_size);

struct RunOptions {
    Strategy strategy = Strategy::BestAmongK;
    int repetitions = 5;
    std::uint64_t seed = 0;
    bool skip_failed = false;    // drop unparseable windows instead of aborting
    bool shuffle_options = false; // seeded option-order shuffle, probes position bias
};

/// Runs the full evaluation: for every repetition and window, deduplicate,
/// build the prompt, query the judge, parse the verdict and score it; then
/// accumulate, normalize and finish with cross-repetition statistics.
///
/// Windows within a repetition are judged concurrently up to
/// judge_config.parallelism; vectors are folded in window order afterwards,
/// so completion order never affects the result. Repetitions run
/// sequentially. A window that still fails to parse after max_attempts
/// aborts the run (default) or is skipped for all models (skip_failed).
ScoreBoard run_evaluation(const EvaluationPool& pool, const RunOptions& run,
                          const JudgeConfig& judge_config, const PromptTemplate& tmpl);

} // namespace xarjudge
