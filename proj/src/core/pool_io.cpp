#include "core/pool_io.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iterator>
#include <random>
#include <set>
#include <sstream>

#include <json.hpp>

#include "core/errors.hpp"
#include "core/validate.hpp"

namespace xarjudge {

using nlohmann::json;

namespace {

void reject_unknown_fields(const json& obj, std::initializer_list<const char*> allowed,
                           const std::string& path) {
    for (const auto& [key, value] : obj.items()) {
        if (std::find_if(allowed.begin(), allowed.end(),
                         [&key](const char* k) { return key == k; }) == allowed.end()) {
            throw Error(ErrorCode::SchemaViolation,
                        path + ": unknown field '" + key + "'");
        }
    }
}

const json& require_field(const json& obj, const char* key, const std::string& path) {
    auto it = obj.find(key);
    if (it == obj.end()) {
        throw Error(ErrorCode::SchemaViolation, path + ": missing field '" + key + "'");
    }
    return *it;
}

std::string require_string(const json& obj, const char* key, const std::string& path) {
    const json& v = require_field(obj, key, path);
    if (!v.is_string()) {
        throw Error(ErrorCode::SchemaViolation, path + "." + key + ": expected a string");
    }
    return v.get<std::string>();
}

double require_number(const json& obj, const char* key, const std::string& path) {
    const json& v = require_field(obj, key, path);
    if (!v.is_number()) {
        throw Error(ErrorCode::SchemaViolation, path + "." + key + ": expected a number");
    }
    return v.get<double>();
}

const json& require_object(const json& obj, const char* key, const std::string& path) {
    const json& v = require_field(obj, key, path);
    if (!v.is_object()) {
        throw Error(ErrorCode::SchemaViolation, path + "." + key + ": expected an object");
    }
    return v;
}

const json& require_array(const json& obj, const char* key, const std::string& path) {
    const json& v = require_field(obj, key, path);
    if (!v.is_array()) {
        throw Error(ErrorCode::SchemaViolation, path + "." + key + ": expected an array");
    }
    return v;
}

std::vector<std::string> string_array(const json& arr, const std::string& path) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < arr.size(); ++i) {
        if (!arr[i].is_string()) {
            throw Error(ErrorCode::SchemaViolation,
                        path + "[" + std::to_string(i) + "]: expected a string");
        }
        out.push_back(arr[i].get<std::string>());
    }
    return out;
}

json parse_document(const std::string& text, const std::string& what) {
    json doc = json::parse(text, nullptr, false);
    if (doc.is_discarded()) {
        throw Error(ErrorCode::MalformedDocument, what + " is not valid JSON");
    }
    if (!doc.is_object()) {
        throw Error(ErrorCode::SchemaViolation, what + ": top-level value must be an object");
    }
    return doc;
}

EvaluationPool decode_pool(const json& doc) {
    reject_unknown_fields(doc, {"roster", "cases"}, "pool");

    EvaluationPool pool;
    const json& roster = require_object(doc, "roster", "pool");
    reject_unknown_fields(roster, {"model_ids", "activity_set"}, "roster");
    pool.roster.model_ids = string_array(require_array(roster, "model_ids", "roster"),
                                         "roster.model_ids");
    pool.roster.activity_set = string_array(require_array(roster, "activity_set", "roster"),
                                            "roster.activity_set");

    const json& cases = require_array(doc, "cases", "pool");
    for (std::size_t ci = 0; ci < cases.size(); ++ci) {
        const std::string cpath = "cases[" + std::to_string(ci) + "]";
        if (!cases[ci].is_object()) {
            throw Error(ErrorCode::SchemaViolation, cpath + ": expected an object");
        }
        reject_unknown_fields(cases[ci], {"window", "candidates"}, cpath);

        WindowCase window_case;
        const json& window = require_object(cases[ci], "window", cpath);
        const std::string wpath = cpath + ".window";
        reject_unknown_fields(window,
                              {"window_id", "duration_seconds", "predicted_activity", "events"},
                              wpath);
        window_case.window.window_id = require_string(window, "window_id", wpath);
        window_case.window.duration_seconds = require_number(window, "duration_seconds", wpath);
        window_case.window.predicted_activity =
            require_string(window, "predicted_activity", wpath);
        const json& events = require_array(window, "events", wpath);
        for (std::size_t ei = 0; ei < events.size(); ++ei) {
            const std::string epath = wpath + ".events[" + std::to_string(ei) + "]";
            if (!events[ei].is_object()) {
                throw Error(ErrorCode::SchemaViolation, epath + ": expected an object");
            }
            reject_unknown_fields(events[ei], {"name", "offset_seconds"}, epath);
            HighLevelEvent event;
            event.name = require_string(events[ei], "name", epath);
            event.offset_seconds = require_number(events[ei], "offset_seconds", epath);
            window_case.window.events.push_back(std::move(event));
        }

        const json& candidates = require_array(cases[ci], "candidates", cpath);
        for (std::size_t pi = 0; pi < candidates.size(); ++pi) {
            const std::string ppath = cpath + ".candidates[" + std::to_string(pi) + "]";
            if (!candidates[pi].is_object()) {
                throw Error(ErrorCode::SchemaViolation, ppath + ": expected an object");
            }
            reject_unknown_fields(candidates[pi], {"model_id", "text"}, ppath);
            ExplanationCandidate cand;
            cand.model_id = require_string(candidates[pi], "model_id", ppath);
            cand.text = require_string(candidates[pi], "text", ppath);
            window_case.candidates.push_back(std::move(cand));
        }
        pool.cases.push_back(std::move(window_case));
    }
    return pool;
}

void require_valid(const EvaluationPool& pool) {
    std::vector<Violation> violations = validate_pool(pool);
    if (violations.empty()) return;
    std::ostringstream msg;
    msg << "pool violates " << violations.size() << " invariant"
        << (violations.size() == 1 ? "" : "s") << ": " << violations.front().path << ": "
        << violations.front().message;
    if (violations.size() > 1) msg << " (and " << violations.size() - 1 << " more)";
    throw Error(ErrorCode::InvariantViolation, msg.str());
}

json encode_pool(const EvaluationPool& pool) {
    json cases = json::array();
    for (const WindowCase& c : pool.cases) {
        json events = json::array();
        for (const HighLevelEvent& e : c.window.events) {
            events.push_back({{"name", e.name}, {"offset_seconds", e.offset_seconds}});
        }
        json candidates = json::array();
        for (const ExplanationCandidate& cand : c.candidates) {
            candidates.push_back({{"model_id", cand.model_id}, {"text", cand.text}});
        }
        cases.push_back({{"window",
                          {{"window_id", c.window.window_id},
                           {"duration_seconds", c.window.duration_seconds},
                           {"predicted_activity", c.window.predicted_activity},
                           {"events", std::move(events)}}},
                         {"candidates", std::move(candidates)}});
    }
    return json{{"roster",
                 {{"model_ids", pool.roster.model_ids},
                  {"activity_set", pool.roster.activity_set}}},
                {"cases", std::move(cases)}};
}

json map_to_json(const std::map<std::string, double>& m) {
    json out = json::object();
    for (const auto& [k, v] : m) out[k] = v;
    return out;
}

json map_to_json(const std::map<std::string, std::int64_t>& m) {
    json out = json::object();
    for (const auto& [k, v] : m) out[k] = v;
    return out;
}

std::map<std::string, double> double_map(const json& obj, const std::string& path) {
    if (!obj.is_object()) {
        throw Error(ErrorCode::SchemaViolation, path + ": expected an object");
    }
    std::map<std::string, double> out;
    for (const auto& [k, v] : obj.items()) {
        if (!v.is_number()) {
            throw Error(ErrorCode::SchemaViolation, path + "." + k + ": expected a number");
        }
        out[k] = v.get<double>();
    }
    return out;
}

std::map<std::string, std::int64_t> int_map(const json& obj, const std::string& path) {
    if (!obj.is_object()) {
        throw Error(ErrorCode::SchemaViolation, path + ": expected an object");
    }
    std::map<std::string, std::int64_t> out;
    for (const auto& [k, v] : obj.items()) {
        if (!v.is_number_integer()) {
            throw Error(ErrorCode::SchemaViolation, path + "." + k + ": expected an integer");
        }
        out[k] = v.get<std::int64_t>();
    }
    return out;
}

std::string lowercased(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

constexpr const char* kIrrelevantEvents[] = {
    "hallway motion",        "front door closed",   "bathroom light toggled",
    "television remote pressed", "bedroom drawer opened", "corridor sensor blip",
};

std::vector<std::string> relevant_event_names(const std::string& activity) {
    const std::string a = lowercased(activity);
    return {
        "motion in the " + a + " area",
        a + " appliance switched on",
        a + " cabinet opened",
        a + " item picked up",
        "pressure change near the " + a + " spot",
    };
}

std::string format_offset(double seconds) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.1f", seconds);
    return buf;
}

} // namespace

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorCode::FileNotFound, "cannot open '" + path + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) {
        throw Error(ErrorCode::IoFailure, "failed reading '" + path + "'");
    }
    return buf.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error(ErrorCode::IoFailure, "cannot open '" + path + "' for writing");
    }
    out << content;
    out.flush();
    if (!out) {
        throw Error(ErrorCode::IoFailure, "failed writing '" + path + "'");
    }
}

EvaluationPool pool_from_json(const std::string& json_text, bool check_invariants) {
    EvaluationPool pool = decode_pool(parse_document(json_text, "pool document"));
    if (check_invariants) require_valid(pool);
    return pool;
}

EvaluationPool load_pool(const std::string& path) {
    return pool_from_json(read_text_file(path), true);
}

EvaluationPool load_pool_lenient(const std::string& path) {
    return pool_from_json(read_text_file(path), false);
}

std::string pool_to_json(const EvaluationPool& pool) { return encode_pool(pool).dump(2) + "\n"; }

void save_pool(const EvaluationPool& pool, const std::string& path) {
    write_text_file(path, pool_to_json(pool));
}

SurveyBenchmark survey_from_json(const std::string& json_text) {
    json doc = parse_document(json_text, "survey document");
    reject_unknown_fields(doc, {"dataset_name", "participant_count", "scores"}, "survey");

    SurveyBenchmark survey;
    survey.dataset_name = require_string(doc, "dataset_name", "survey");
    const json& count = require_field(doc, "participant_count", "survey");
    if (!count.is_number_integer() || count.get<std::int64_t>() <= 0) {
        throw Error(ErrorCode::SchemaViolation,
                    "survey.participant_count: expected a positive integer");
    }
    survey.participant_count = count.get<int>();
    survey.scores = double_map(require_object(doc, "scores", "survey"), "survey.scores");
    if (survey.scores.empty()) {
        throw Error(ErrorCode::SchemaViolation, "survey.scores: must not be empty");
    }
    for (const auto& [id, score] : survey.scores) {
        if (score < 0.0 || score > 1.0) {
            throw Error(ErrorCode::InvariantViolation,
                        "survey score for '" + id + "' is outside [0,1]");
        }
    }
    return survey;
}

SurveyBenchmark load_survey(const std::string& path) {
    return survey_from_json(read_text_file(path));
}

QualityOracle oracle_from_json(const std::string& json_text) {
    json doc = parse_document(json_text, "oracle document");
    reject_unknown_fields(doc, {"kind", "quality_order", "tiers"}, "oracle");
    const std::string kind = require_string(doc, "kind", "oracle");
    if (kind != "xarjudge_oracle") {
        throw Error(ErrorCode::SchemaViolation,
                    "oracle.kind: expected \"xarjudge_oracle\", got \"" + kind + "\"");
    }
    QualityOracle oracle;
    oracle.quality_order = string_array(require_array(doc, "quality_order", "oracle"),
                                        "oracle.quality_order");
    if (oracle.quality_order.empty()) {
        throw Error(ErrorCode::SchemaViolation, "oracle.quality_order: must not be empty");
    }
    if (doc.contains("tiers")) {
        const json& tiers = doc["tiers"];
        if (!tiers.is_object()) {
            throw Error(ErrorCode::SchemaViolation, "oracle.tiers: expected an object");
        }
        for (const auto& [id, v] : tiers.items()) {
            if (!v.is_number_integer() || v.get<int>() < 0 || v.get<int>() > 2) {
                throw Error(ErrorCode::SchemaViolation,
                            "oracle.tiers." + id + ": expected an integer in 0..2");
            }
            oracle.tiers[id] = v.get<int>();
        }
    } else {
        oracle.tiers = QualityOracle::from_order(oracle.quality_order).tiers;
    }
    return oracle;
}

QualityOracle load_oracle(const std::string& path) {
    return oracle_from_json(read_text_file(path));
}

std::string oracle_to_json(const QualityOracle& oracle) {
    json tiers = json::object();
    for (const auto& [id, tier] : oracle.tiers) tiers[id] = tier;
    json doc = {{"kind", "xarjudge_oracle"},
                {"quality_order", oracle.quality_order},
                {"tiers", std::move(tiers)}};
    return doc.dump(2) + "\n";
}

std::string report_to_json(const ScoreBoard& board, const ComparisonReport* comparison) {
    json runs = json::array();
    for (const RepetitionResult& run : board.runs) {
        runs.push_back({{"raw", map_to_json(run.raw)},
                        {"normalized", map_to_json(run.normalized)},
                        {"pool_size", run.pool_size},
                        {"skipped_windows", run.skipped_windows}});
    }
    json doc = {
        {"kind", "xarjudge_report"},
        {"config",
         {{"strategy", strategy_name(board.fingerprint.strategy)},
          {"backend", board.fingerprint.backend},
          {"model_name", board.fingerprint.model_name},
          {"temperature", board.fingerprint.temperature},
          {"seed", board.fingerprint.seed},
          {"repetitions", board.fingerprint.repetitions},
          {"template_hash", board.fingerprint.template_hash}}},
        {"strategy", strategy_name(board.strategy)},
        {"model_ids", board.model_ids},
        {"pool_size", board.pool_size},
        {"raw_totals", map_to_json(board.raw_totals)},
        {"normalized", map_to_json(board.normalized)},
        {"mean", map_to_json(board.mean)},
        {"std", map_to_json(board.stddev)},
        {"runs", std::move(runs)},
        {"ranking", board.ranking},
        {"tie", board.tie},
        {"winners", board.winners},
        {"single_repetition", board.single_repetition},
    };
    if (comparison != nullptr) {
        doc["comparison"] = {{"dataset_name", comparison->dataset_name},
                             {"participant_count", comparison->participant_count},
                             {"kendall_tau", comparison->kendall_tau},
                             {"exact_rank_match", comparison->exact_rank_match},
                             {"llm_ranking", comparison->llm_ranking},
                             {"survey_ranking", comparison->survey_ranking},
                             {"survey_tie", comparison->survey_tie},
                             {"per_model_delta", map_to_json(comparison->per_model_delta)}};
    }
    return doc.dump(2) + "\n";
}

void save_report(const ScoreBoard& board, const ComparisonReport* comparison,
                 const std::string& path) {
    write_text_file(path, report_to_json(board, comparison));
}

ScoreBoard report_from_json(const std::string& json_text,
                            std::optional<ComparisonReport>* comparison) {
    json doc = parse_document(json_text, "report document");
    reject_unknown_fields(doc,
                          {"kind", "config", "strategy", "model_ids", "pool_size", "raw_totals",
                           "normalized", "mean", "std", "runs", "ranking", "tie", "winners",
                           "single_repetition", "comparison"},
                          "report");
    if (require_string(doc, "kind", "report") != "xarjudge_report") {
        throw Error(ErrorCode::SchemaViolation, "report.kind: expected \"xarjudge_report\"");
    }

    ScoreBoard board;
    board.strategy = strategy_from_name(require_string(doc, "strategy", "report"));
    board.model_ids = string_array(require_array(doc, "model_ids", "report"), "report.model_ids");
    const json& pool_size = require_field(doc, "pool_size", "report");
    if (!pool_size.is_number_unsigned() && !pool_size.is_number_integer()) {
        throw Error(ErrorCode::SchemaViolation, "report.pool_size: expected an integer");
    }
    board.pool_size = pool_size.get<std::size_t>();
    board.raw_totals = int_map(require_field(doc, "raw_totals", "report"), "report.raw_totals");
    board.normalized = double_map(require_field(doc, "normalized", "report"), "report.normalized");
    board.mean = double_map(require_field(doc, "mean", "report"), "report.mean");
    board.stddev = double_map(require_field(doc, "std", "report"), "report.std");

    const json& runs = require_array(doc, "runs", "report");
    for (std::size_t i = 0; i < runs.size(); ++i) {
        const std::string rpath = "report.runs[" + std::to_string(i) + "]";
        if (!runs[i].is_object()) {
            throw Error(ErrorCode::SchemaViolation, rpath + ": expected an object");
        }
        reject_unknown_fields(runs[i], {"raw", "normalized", "pool_size", "skipped_windows"},
                              rpath);
        RepetitionResult run;
        run.raw = int_map(require_field(runs[i], "raw", rpath), rpath + ".raw");
        run.normalized =
            double_map(require_field(runs[i], "normalized", rpath), rpath + ".normalized");
        run.pool_size = require_field(runs[i], "pool_size", rpath).get<std::size_t>();
        run.skipped_windows = string_array(require_array(runs[i], "skipped_windows", rpath),
                                           rpath + ".skipped_windows");
        board.runs.push_back(std::move(run));
    }

    board.ranking = string_array(require_array(doc, "ranking", "report"), "report.ranking");
    const json& tie = require_field(doc, "tie", "report");
    if (!tie.is_boolean()) {
        throw Error(ErrorCode::SchemaViolation, "report.tie: expected a boolean");
    }
    board.tie = tie.get<bool>();
    board.winners = string_array(require_array(doc, "winners", "report"), "report.winners");
    const json& single = require_field(doc, "single_repetition", "report");
    if (!single.is_boolean()) {
        throw Error(ErrorCode::SchemaViolation, "report.single_repetition: expected a boolean");
    }
    board.single_repetition = single.get<bool>();

    const json& config = require_object(doc, "config", "report");
    reject_unknown_fields(config,
                          {"strategy", "backend", "model_name", "temperature", "seed",
                           "repetitions", "template_hash"},
                          "report.config");
    board.fingerprint.strategy =
        strategy_from_name(require_string(config, "strategy", "report.config"));
    board.fingerprint.backend = require_string(config, "backend", "report.config");
    board.fingerprint.model_name = require_string(config, "model_name", "report.config");
    board.fingerprint.temperature = require_number(config, "temperature", "report.config");
    board.fingerprint.seed = require_field(config, "seed", "report.config").get<std::uint64_t>();
    board.fingerprint.repetitions =
        require_field(config, "repetitions", "report.config").get<int>();
    board.fingerprint.template_hash = require_string(config, "template_hash", "report.config");

    if (comparison != nullptr) {
        comparison->reset();
        if (doc.contains("comparison")) {
            const json& c = doc["comparison"];
            reject_unknown_fields(c,
                                  {"dataset_name", "participant_count", "kendall_tau",
                                   "exact_rank_match", "llm_ranking", "survey_ranking",
                                   "survey_tie", "per_model_delta"},
                                  "report.comparison");
            ComparisonReport r;
            r.dataset_name = require_string(c, "dataset_name", "report.comparison");
            r.participant_count =
                require_field(c, "participant_count", "report.comparison").get<int>();
            r.kendall_tau = require_number(c, "kendall_tau", "report.comparison");
            r.exact_rank_match =
                require_field(c, "exact_rank_match", "report.comparison").get<bool>();
            r.llm_ranking = string_array(require_array(c, "llm_ranking", "report.comparison"),
                                         "report.comparison.llm_ranking");
            r.survey_ranking = string_array(require_array(c, "survey_ranking", "report.comparison"),
                                            "report.comparison.survey_ranking");
            r.survey_tie = require_field(c, "survey_tie", "report.comparison").get<bool>();
            r.per_model_delta = double_map(require_field(c, "per_model_delta", "report.comparison"),
                                           "report.comparison.per_model_delta");
            *comparison = std::move(r);
        }
    }
    return board;
}

ScoreBoard load_report(const std::string& path, std::optional<ComparisonReport>* comparison) {
    return report_from_json(read_text_file(path), comparison);
}

SynthResult generate_synthetic_pool(const ModelRoster& roster, int per_activity,
                                    std::uint64_t seed,
                                    const std::vector<std::string>& quality_order) {
    if (per_activity < 1) {
        throw Error(ErrorCode::InvalidArgument, "per_activity must be >= 1");
    }
    if (roster.model_ids.empty() || roster.activity_set.empty()) {
        throw Error(ErrorCode::InvalidArgument, "roster needs at least one model and one activity");
    }
    {
        std::multiset<std::string> expected(roster.model_ids.begin(), roster.model_ids.end());
        std::multiset<std::string> given(quality_order.begin(), quality_order.end());
        if (expected != given) {
            throw Error(ErrorCode::InvalidQualityOrder,
                        "quality_order must be a permutation of the roster's model ids");
        }
    }

    QualityOracle oracle = QualityOracle::from_order(quality_order);
    std::mt19937_64 gen(seed);
    constexpr double kDuration = 60.0;

    EvaluationPool pool;
    pool.roster = roster;

    int window_seq = 0;
    for (const std::string& activity : roster.activity_set) {
        const std::vector<std::string> relevant = relevant_event_names(activity);
        for (int i = 0; i < per_activity; ++i) {
            ++window_seq;
            WindowCase window_case;
            EventWindow& w = window_case.window;
            char id[16];
            std::snprintf(id, sizeof(id), "w%03d", window_seq);
            w.window_id = id;
            w.duration_seconds = kDuration;
            w.predicted_activity = activity;

            // 2-3 relevant events plus one irrelevant one, offsets ascending.
            const std::size_t n_relevant = 2 + gen() % 2;
            std::vector<std::string> names;
            std::size_t first = gen() % relevant.size();
            for (std::size_t r = 0; r < n_relevant; ++r) {
                names.push_back(relevant[(first + r) % relevant.size()]);
            }
            const std::string irrelevant =
                kIrrelevantEvents[gen() % std::size(kIrrelevantEvents)];
            names.push_back(irrelevant);

            std::vector<double> offsets;
            for (std::size_t r = 0; r < names.size(); ++r) {
                offsets.push_back(static_cast<double>(gen() % 600) / 10.0);
            }
            std::sort(offsets.begin(), offsets.end());
            for (std::size_t r = 0; r < names.size(); ++r) {
                w.events.push_back({names[r], offsets[r]});
            }

            // Tier texts: shared by every model in the tier, so equal-quality
            // models produce genuine duplicate explanations.
            const std::string relevant_a = names[0];
            const std::string relevant_b = names[1 % names.size()];
            std::string tier_text[3];
            tier_text[0] = "I predicted " + activity + " mainly because " + relevant_a + " at " +
                           format_offset(offsets[0]) + " s and then " + relevant_b + " at " +
                           format_offset(offsets[1]) + " s within the window.";
            tier_text[1] = "I predicted " + activity + " because " + relevant_a +
                           " happened, and I also noticed " + irrelevant + ".";
            tier_text[2] = "I predicted " + activity + " mostly because " + irrelevant +
                           " and the time of day.";

            for (const std::string& model_id : roster.model_ids) {
                window_case.candidates.push_back(
                    {model_id, tier_text[oracle.tier_of(model_id)]});
            }
            pool.cases.push_back(std::move(window_case));
        }
    }

    return {std::move(pool), std::move(oracle)};
}

} // namespace xarjudge
