#include "core/compare.hpp"

#include <algorithm>
#include <cstdio>
#include <set>
#include <sstream>

#include "core/errors.hpp"

namespace xarjudge {

namespace {

std::string fixed(double value, int decimals = 3, bool sign = false) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), sign ? "%+.*f" : "%.*f", decimals, value);
    return buf;
}

std::string join_ranking(const std::vector<std::string>& ranking) {
    std::string out;
    for (std::size_t i = 0; i < ranking.size(); ++i) {
        if (i > 0) out += " > ";
        out += ranking[i];
    }
    return out;
}

} // namespace

std::vector<std::string> rank_models(const std::map<std::string, double>& scores,
                                     const ModelRoster& roster, bool* tie_flag) {
    if (scores.size() != roster.model_ids.size()) {
        throw Error(ErrorCode::RosterMismatch, "scores do not cover the roster exactly");
    }
    for (const std::string& id : roster.model_ids) {
        if (scores.find(id) == scores.end()) {
            throw Error(ErrorCode::RosterMismatch, "no score for roster model '" + id + "'");
        }
    }
    std::vector<std::string> ranking = roster.model_ids;
    std::stable_sort(ranking.begin(), ranking.end(),
                     [&](const std::string& a, const std::string& b) {
                         return scores.at(a) > scores.at(b);
                     });
    if (tie_flag != nullptr) {
        *tie_flag = false;
        for (std::size_t i = 1; i < ranking.size(); ++i) {
            if (scores.at(ranking[i - 1]) == scores.at(ranking[i])) {
                *tie_flag = true;
                break;
            }
        }
    }
    return ranking;
}

double kendall_tau(const std::vector<std::string>& ranking_a,
                   const std::vector<std::string>& ranking_b) {
    const std::size_t n = ranking_a.size();
    if (n < 2) {
        throw Error(ErrorCode::TooFewItems, "kendall tau needs at least 2 items");
    }
    if (ranking_b.size() != n) {
        throw Error(ErrorCode::NotSamePermutationDomain, "rankings have different lengths");
    }
    std::map<std::string, std::size_t> pos_b;
    for (std::size_t i = 0; i < n; ++i) {
        if (!pos_b.emplace(ranking_b[i], i).second) {
            throw Error(ErrorCode::NotSamePermutationDomain,
                        "duplicate id '" + ranking_b[i] + "' in ranking");
        }
    }
    {
        std::set<std::string> seen_a(ranking_a.begin(), ranking_a.end());
        if (seen_a.size() != n) {
            throw Error(ErrorCode::NotSamePermutationDomain, "duplicate id in ranking");
        }
    }
    for (const std::string& id : ranking_a) {
        if (pos_b.find(id) == pos_b.end()) {
            throw Error(ErrorCode::NotSamePermutationDomain,
                        "id '" + id + "' is missing from the other ranking");
        }
    }

    long long concordant = 0;
    long long discordant = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t pos_i = pos_b.at(ranking_a[i]);
        for (std::size_t j = i + 1; j < n; ++j) {
            // a places i before j; concordant iff b agrees.
            if (pos_i < pos_b.at(ranking_a[j])) {
                ++concordant;
            } else {
                ++discordant;
            }
        }
    }
    const double pairs = static_cast<double>(n) * static_cast<double>(n - 1) / 2.0;
    return static_cast<double>(concordant - discordant) / pairs;
}

ComparisonReport compare(const ScoreBoard& board, const SurveyBenchmark& survey) {
    std::set<std::string> board_ids(board.model_ids.begin(), board.model_ids.end());
    std::set<std::string> survey_ids;
    for (const auto& [id, score] : survey.scores) survey_ids.insert(id);
    if (board_ids != survey_ids) {
        throw Error(ErrorCode::ModelSetMismatch,
                    "the board and the survey cover different model sets");
    }

    ModelRoster roster;
    roster.model_ids = board.model_ids;
    roster.activity_set = {"-"}; // rank_models only looks at model_ids

    ComparisonReport report;
    report.llm_ranking = board.ranking;
    report.survey_ranking = rank_models(survey.scores, roster, &report.survey_tie);
    report.kendall_tau = kendall_tau(report.llm_ranking, report.survey_ranking);
    report.exact_rank_match = report.llm_ranking == report.survey_ranking;
    for (const std::string& id : board.model_ids) {
        report.per_model_delta[id] = board.normalized.at(id) - survey.scores.at(id);
    }
    report.dataset_name = survey.dataset_name;
    report.participant_count = survey.participant_count;
    return report;
}

std::string render_report(const ScoreBoard& board, const ComparisonReport* comparison) {
    std::ostringstream out;
    std::size_t name_width = 5;
    for (const std::string& id : board.model_ids) name_width = std::max(name_width, id.size());

    out << "=== XAR judge report ===\n";
    out << "strategy:     " << strategy_name(board.strategy) << "\n";
    out << "backend:      " << board.fingerprint.backend << "\n";
    out << "judge model:  " << board.fingerprint.model_name << "\n";
    out << "temperature:  " << fixed(board.fingerprint.temperature, 2) << "\n";
    out << "pool size:    " << board.pool_size << "\n";
    out << "repetitions:  " << board.fingerprint.repetitions
        << (board.single_repetition ? " (single run, std reported as 0)" : "") << "\n";
    out << "seed:         " << board.fingerprint.seed << "\n";
    out << "template:     " << board.fingerprint.template_hash << "\n";
    out << "\n";

    out << "  " << "model";
    out << std::string(name_width - 5 + 3, ' ') << "mean     std      raw\n";
    for (const std::string& id : board.ranking) {
        out << "  " << id << std::string(name_width - id.size() + 3, ' ')
            << fixed(board.mean.at(id)) << "    " << fixed(board.stddev.at(id)) << "    "
            << board.raw_totals.at(id) << "\n";
    }
    out << "\n";
    out << "ranking:      " << join_ranking(board.ranking)
        << (board.tie ? "   (ties broken by roster order)" : "") << "\n";
    out << "winner:       ";
    for (std::size_t i = 0; i < board.winners.size(); ++i) {
        if (i > 0) out << ", ";
        out << board.winners[i];
    }
    if (board.winners.size() > 1) out << " (tie)";
    out << "\n";

    if (comparison != nullptr) {
        out << "\n--- comparison vs survey '" << comparison->dataset_name << "' ("
            << comparison->participant_count << " participants) ---\n";
        out << "kendall tau:       " << fixed(comparison->kendall_tau) << "\n";
        out << "exact rank match:  " << (comparison->exact_rank_match ? "yes" : "no") << "\n";
        out << "llm ranking:       " << join_ranking(comparison->llm_ranking) << "\n";
        out << "survey ranking:    " << join_ranking(comparison->survey_ranking)
            << (comparison->survey_tie ? "   (ties broken by roster order)" : "") << "\n";
        out << "delta (llm - survey):\n";
        for (const std::string& id : board.model_ids) {
            out << "  " << id << std::string(name_width - id.size() + 3, ' ')
                << fixed(comparison->per_model_delta.at(id), 3, true) << "\n";
        }
    }
    return out.str();
}

} // namespace xarjudge
