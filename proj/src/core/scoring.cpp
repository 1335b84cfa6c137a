#include "core/scoring.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <optional>
#include <random>
#include <thread>

#include "core/errors.hpp"
#include "core/validate.hpp"

namespace xarjudge {

namespace {

bool is_verdict_failure(ErrorCode code) {
    switch (code) {
    case ErrorCode::MissingFinalLine:
    case ErrorCode::UnknownLabel:
    case ErrorCode::IncompleteScores:
    case ErrorCode::OutOfRangeScore:
    case ErrorCode::StrategyMismatch:
    case ErrorCode::EmptyCompletion:
        return true;
    default:
        return false;
    }
}

// splitmix64, used to derive independent shuffle seeds per (rep, window).
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t rep, std::uint64_t index) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (rep * 0x100000001ull + index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

std::vector<UniqueOption> shuffle_and_relabel(std::vector<UniqueOption> options,
                                              std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    for (std::size_t i = options.size(); i > 1; --i) {
        std::size_t j = gen() % i;
        std::swap(options[i - 1], options[j]);
    }
    for (std::size_t i = 0; i < options.size(); ++i) {
        options[i].label = std::string(1, static_cast<char>('A' + i));
    }
    return options;
}

ScoreVector judge_window(const WindowCase& window_case, Strategy strategy,
                         JudgeBackend& backend, const PromptTemplate& tmpl,
                         const ModelRoster& roster, int max_attempts,
                         bool shuffle, std::uint64_t shuffle_seed) {
    std::vector<UniqueOption> options = deduplicate(window_case, roster);
    if (shuffle) {
        options = shuffle_and_relabel(std::move(options), shuffle_seed);
    }
    PromptBundle bundle = build_prompt(strategy, window_case, options, tmpl);

    std::vector<std::string> labels;
    labels.reserve(options.size());
    for (const UniqueOption& opt : options) labels.push_back(opt.label);

    std::optional<Error> last_failure;
    for (int attempt = 1; attempt <= max_attempts; ++attempt) {
        try {
            JudgeResponse response = backend.complete(bundle);
            JudgeVerdict verdict = parse_verdict(response.raw_text, strategy, labels);
            return strategy == Strategy::BestAmongK
                       ? score_best_among_k(verdict, options, roster)
                       : score_likert(verdict, options, roster);
        } catch (const Error& e) {
            if (!is_verdict_failure(e.code())) throw;
            last_failure = e;
        }
    }
    throw Error(last_failure->code(),
                "window '" + window_case.window.window_id + "': " + last_failure->what() +
                    " (after " + std::to_string(max_attempts) + " attempts)");
}

std::map<std::string, double> per_model_mean(const std::vector<RepetitionResult>& runs,
                                             const std::vector<std::string>& model_ids) {
    std::map<std::string, double> mean;
    for (const std::string& id : model_ids) {
        double sum = 0.0;
        for (const RepetitionResult& run : runs) sum += run.normalized.at(id);
        mean[id] = sum / static_cast<double>(runs.size());
    }
    return mean;
}

std::map<std::string, double> per_model_stddev(const std::vector<RepetitionResult>& runs,
                                               const std::map<std::string, double>& mean) {
    std::map<std::string, double> sd;
    const std::size_t n = runs.size();
    for (const auto& [id, m] : mean) {
        if (n < 2) {
            sd[id] = 0.0;
            continue;
        }
        double acc = 0.0;
        for (const RepetitionResult& run : runs) {
            double d = run.normalized.at(id) - m;
            acc += d * d;
        }
        sd[id] = std::sqrt(acc / static_cast<double>(n - 1));
    }
    return sd;
}

} // namespace

ScoreVector score_best_among_k(const JudgeVerdict& verdict,
                               const std::vector<UniqueOption>& options,
                               const ModelRoster& roster) {
    const UniqueOption* chosen = nullptr;
    for (const UniqueOption& opt : options) {
        if (opt.label == verdict.chosen_label) {
            chosen = &opt;
            break;
        }
    }
    if (chosen == nullptr) {
        throw Error(ErrorCode::LabelNotFound,
                    "chosen label '" + verdict.chosen_label + "' matches no option");
    }

    ScoreVector v;
    for (const std::string& id : roster.model_ids) v.values[id] = 0;
    for (const std::string& contributor : chosen->contributors) v.values[contributor] = 1;
    return v;
}

ScoreVector score_likert(const JudgeVerdict& verdict, const std::vector<UniqueOption>& options,
                         const ModelRoster& roster) {
    ScoreVector v;
    for (const UniqueOption& opt : options) {
        auto it = verdict.scores.find(opt.label);
        if (it == verdict.scores.end()) {
            throw Error(ErrorCode::IncompleteScores,
                        "option '" + opt.label + "' has no score in the verdict");
        }
        for (const std::string& contributor : opt.contributors) {
            v.values[contributor] = it->second;
        }
    }
    // The contributor lists partition the roster, so every model is covered.
    for (const std::string& id : roster.model_ids) {
        if (v.values.find(id) == v.values.end()) {
            throw Error(ErrorCode::RosterMismatch,
                        "model '" + id + "' contributed to no option");
        }
    }
    return v;
}

std::map<std::string, std::int64_t> accumulate(const std::vector<ScoreVector>& vectors,
                                               const ModelRoster& roster) {
    if (vectors.empty()) {
        throw Error(ErrorCode::EmptyPool, "no score vectors to accumulate");
    }
    std::map<std::string, std::int64_t> totals;
    for (const std::string& id : roster.model_ids) totals[id] = 0;
    for (const ScoreVector& v : vectors) {
        if (v.values.size() != roster.model_ids.size()) {
            throw Error(ErrorCode::RosterMismatch,
                        "score vector for window '" + v.window_id +
                            "' does not cover the roster");
        }
        for (const auto& [id, value] : v.values) {
            auto it = totals.find(id);
            if (it == totals.end()) {
                throw Error(ErrorCode::RosterMismatch,
                            "score vector for window '" + v.window_id +
                                "' names unknown model '" + id + "'");
            }
            it->second += value;
        }
    }
    return totals;
}

std::map<std::string, double> normalize(const std::map<std::string, std::int64_t>& raw_totals,
                                        Strategy strategy, std::size_t pool_size) {
    if (pool_size == 0) {
        throw Error(ErrorCode::EmptyPool, "cannot normalize over an empty pool");
    }
    const auto p = static_cast<double>(pool_size);
    std::map<std::string, double> out;
    for (const auto& [id, total] : raw_totals) {
        if (strategy == Strategy::BestAmongK) {
            if (total < 0 || total > static_cast<std::int64_t>(pool_size)) {
                throw Error(ErrorCode::OutOfRangeTotal,
                            "total " + std::to_string(total) + " for model '" + id +
                                "' is outside [0, " + std::to_string(pool_size) + "]");
            }
            out[id] = static_cast<double>(total) / p;
        } else {
            if (total < static_cast<std::int64_t>(pool_size) ||
                total > static_cast<std::int64_t>(5 * pool_size)) {
                throw Error(ErrorCode::OutOfRangeTotal,
                            "total " + std::to_string(total) + " for model '" + id +
                                "' is outside [" + std::to_string(pool_size) + ", " +
                                std::to_string(5 * pool_size) + "]");
            }
            out[id] = (static_cast<double>(total) / p - 1.0) / 4.0;
        }
    }
    return out;
}

ScoreBoard run_evaluation(const EvaluationPool& pool, const RunOptions& run,
                          const JudgeConfig& judge_config, const PromptTemplate& tmpl) {
    if (run.repetitions < 1) {
        throw Error(ErrorCode::InvalidArgument, "repetitions must be >= 1");
    }
    std::vector<Violation> violations = validate_pool(pool);
    if (!violations.empty()) {
        throw Error(ErrorCode::InvariantViolation,
                    "pool is invalid: " + violations.front().path + ": " +
                        violations.front().message +
                        (violations.size() > 1
                             ? " (and " + std::to_string(violations.size() - 1) + " more)"
                             : ""));
    }

    std::unique_ptr<JudgeBackend> backend = make_backend(judge_config);
    const std::size_t n_cases = pool.cases.size();

    ScoreBoard board;
    board.strategy = run.strategy;
    board.model_ids = pool.roster.model_ids;
    board.pool_size = n_cases;

    for (int rep = 0; rep < run.repetitions; ++rep) {
        std::vector<std::optional<ScoreVector>> results(n_cases);
        std::vector<std::exception_ptr> failures(n_cases);
        std::vector<bool> skipped(n_cases, false);

        std::atomic<std::size_t> next{0};
        auto worker = [&]() {
            while (true) {
                const std::size_t i = next.fetch_add(1);
                if (i >= n_cases) return;
                try {
                    ScoreVector v = judge_window(
                        pool.cases[i], run.strategy, *backend, tmpl, pool.roster,
                        judge_config.max_attempts, run.shuffle_options,
                        mix_seed(run.seed, static_cast<std::uint64_t>(rep), i));
                    v.window_id = pool.cases[i].window.window_id;
                    results[i] = std::move(v);
                } catch (const Error& e) {
                    if (run.skip_failed && is_verdict_failure(e.code())) {
                        skipped[i] = true;
                    } else {
                        failures[i] = std::current_exception();
                    }
                } catch (...) {
                    failures[i] = std::current_exception();
                }
            }
        };

        const std::size_t n_workers =
            std::min<std::size_t>(static_cast<std::size_t>(judge_config.parallelism), n_cases);
        std::vector<std::thread> threads;
        threads.reserve(n_workers);
        for (std::size_t t = 0; t < n_workers; ++t) threads.emplace_back(worker);
        for (std::thread& t : threads) t.join();

        // Rethrow the lowest-index failure so the abort is deterministic.
        for (std::size_t i = 0; i < n_cases; ++i) {
            if (failures[i]) std::rethrow_exception(failures[i]);
        }

        RepetitionResult rep_result;
        std::vector<ScoreVector> vectors;
        vectors.reserve(n_cases);
        for (std::size_t i = 0; i < n_cases; ++i) {
            if (skipped[i]) {
                rep_result.skipped_windows.push_back(pool.cases[i].window.window_id);
                continue;
            }
            vectors.push_back(std::move(*results[i]));
        }
        if (vectors.empty()) {
            throw Error(ErrorCode::EmptyPool, "every window failed; nothing to score");
        }
        rep_result.pool_size = vectors.size();
        rep_result.raw = accumulate(vectors, pool.roster);
        rep_result.normalized = normalize(rep_result.raw, run.strategy, rep_result.pool_size);
        board.runs.push_back(std::move(rep_result));
    }

    board.raw_totals = board.runs.front().raw;
    board.mean = per_model_mean(board.runs, board.model_ids);
    board.stddev = per_model_stddev(board.runs, board.mean);
    board.normalized = board.mean;
    board.single_repetition = run.repetitions == 1;

    // Ranking: mean descending, ties broken by roster order (stable sort).
    board.ranking = board.model_ids;
    std::stable_sort(board.ranking.begin(), board.ranking.end(),
                     [&](const std::string& a, const std::string& b) {
                         return board.mean.at(a) > board.mean.at(b);
                     });
    for (std::size_t i = 1; i < board.ranking.size(); ++i) {
        if (board.mean.at(board.ranking[i - 1]) == board.mean.at(board.ranking[i])) {
            board.tie = true;
            break;
        }
    }
    const double top = board.mean.at(board.ranking.front());
    for (const std::string& id : board.model_ids) {
        if (board.mean.at(id) == top) board.winners.push_back(id);
    }

    board.fingerprint.strategy = run.strategy;
    board.fingerprint.backend =
        judge_config.backend_kind == BackendKind::Mock ? "mock" : "http_chat";
    board.fingerprint.model_name = judge_config.model_name;
    board.fingerprint.temperature = judge_config.temperature;
    board.fingerprint.seed = run.seed;
    board.fingerprint.repetitions = run.repetitions;
    board.fingerprint.template_hash = tmpl.hash();
    return board;
}

} // namespace xarjudge
