// C API shim: translates the C++ core into opaque handles, status codes and
// malloc'd strings. No logic of its own beyond the error-code mapping.

#include "xarjudge/xarjudge.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <new>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "core/compare.hpp"
#include "core/errors.hpp"
#include "core/judge.hpp"
#include "core/pool_io.hpp"
#include "core/prompt.hpp"
#include "core/scoring.hpp"
#include "core/types.hpp"
#include "core/validate.hpp"

using xarjudge::Error;
using xarjudge::ErrorCode;

struct xj_pool {
    xarjudge::EvaluationPool value;
};

struct xj_config {
    xarjudge::RunOptions run;
    xarjudge::JudgeConfig judge;
    xarjudge::PromptTemplate tmpl = xarjudge::PromptTemplate::bundled_default();
};

struct xj_board {
    xarjudge::ScoreBoard value;
};

struct xj_survey {
    xarjudge::SurveyBenchmark value;
};

struct xj_comparison {
    xarjudge::ComparisonReport value;
};

namespace {

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (out == nullptr) return nullptr;
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

void set_err(char** errmsg, const std::string& message) {
    if (errmsg != nullptr) *errmsg = dup_string(message);
}

xj_status map_code(ErrorCode code) {
    switch (code) {
        case ErrorCode::FileNotFound:
        case ErrorCode::IoFailure:
            return XJ_E_IO;
        case ErrorCode::MalformedDocument:
            return XJ_E_MALFORMED;
        case ErrorCode::SchemaViolation:
            return XJ_E_SCHEMA;
        case ErrorCode::InvariantViolation:
        case ErrorCode::EmptyPool:
            return XJ_E_INVARIANT;
        case ErrorCode::InvalidArgument:
        case ErrorCode::InvalidQualityOrder:
        case ErrorCode::UnknownModel:
        case ErrorCode::LabelNotFound:
        case ErrorCode::RosterMismatch:
        case ErrorCode::OutOfRangeTotal:
        case ErrorCode::NotSamePermutationDomain:
        case ErrorCode::TooFewItems:
            return XJ_E_INVALID_ARG;
        case ErrorCode::TemplateMissingPlaceholder:
            return XJ_E_TEMPLATE;
        case ErrorCode::BackendUnavailable:
            return XJ_E_BACKEND;
        case ErrorCode::AuthFailure:
            return XJ_E_AUTH;
        case ErrorCode::EmptyCompletion:
            return XJ_E_EMPTY_COMPLETION;
        case ErrorCode::MissingFinalLine:
        case ErrorCode::UnknownLabel:
        case ErrorCode::IncompleteScores:
        case ErrorCode::OutOfRangeScore:
        case ErrorCode::StrategyMismatch:
            return XJ_E_PARSE;
        case ErrorCode::ModelSetMismatch:
            return XJ_E_MODEL_SET_MISMATCH;
    }
    return XJ_E_INTERNAL;
}

template <typename Fn>
xj_status guarded(char** errmsg, Fn&& fn) {
    try {
        fn();
        return XJ_OK;
    } catch (const Error& e) {
        set_err(errmsg, e.what());
        return map_code(e.code());
    } catch (const std::bad_alloc&) {
        set_err(errmsg, "out of memory");
        return XJ_E_INTERNAL;
    } catch (const std::exception& e) {
        set_err(errmsg, e.what());
        return XJ_E_INTERNAL;
    }
}

std::vector<std::string> to_string_vector(const char* const* items, int n) {
    std::vector<std::string> out;
    out.reserve(n > 0 ? static_cast<std::size_t>(n) : 0);
    for (int i = 0; i < n; ++i) {
        out.emplace_back(items[i] == nullptr ? "" : items[i]);
    }
    return out;
}

} // namespace

extern "C" {

const char* xj_version(void) { return "1.0.0"; }

const char* xj_status_name(xj_status status) {
    switch (status) {
        case XJ_OK: return "ok";
        case XJ_E_IO: return "io";
        case XJ_E_MALFORMED: return "malformed";
        case XJ_E_SCHEMA: return "schema";
        case XJ_E_INVARIANT: return "invariant";
        case XJ_E_INVALID_ARG: return "invalid_arg";
        case XJ_E_TEMPLATE: return "template";
        case XJ_E_BACKEND: return "backend";
        case XJ_E_AUTH: return "auth";
        case XJ_E_EMPTY_COMPLETION: return "empty_completion";
        case XJ_E_PARSE: return "parse";
        case XJ_E_MODEL_SET_MISMATCH: return "model_set_mismatch";
        case XJ_E_INTERNAL: return "internal";
    }
    return "unknown";
}

void xj_string_free(char* s) { std::free(s); }

/* ------------------------------------------------------------------ */

xj_status xj_pool_load(const char* path, xj_pool** out, char** errmsg) {
    if (path == nullptr || out == nullptr) {
        set_err(errmsg, "path and out must not be null");
        return XJ_E_INVALID_ARG;
    }
    return guarded(errmsg, [&] { *out = new xj_pool{xarjudge::load_pool(path)}; });
}

xj_status xj_pool_load_lenient(const char* path, xj_pool** out, char** errmsg) {
    if (path == nullptr || out == nullptr) {
        set_err(errmsg, "path and out must not be null");
        return XJ_E_INVALID_ARG;
    }
    return guarded(errmsg, [&] { *out = new xj_pool{xarjudge::load_pool_lenient(path)}; });
}

xj_status xj_pool_from_json(const char* json_text, xj_pool** out, char** errmsg) {
    if (json_text == nullptr || out == nullptr) {
        set_err(errmsg, "json_text and out must not be null");
        return XJ_E_INVALID_ARG;
    }
    return guarded(errmsg, [&] { *out = new xj_pool{xarjudge::pool_from_json(json_text)}; });
}

xj_status xj_pool_save(const xj_pool* pool, const char* path, char** errmsg) {
    if (pool == nullptr || path == nullptr) {
        set_err(errmsg, "pool and path must not be null");
        return XJ_E_INVALID_ARG;
    }
    return guarded(errmsg, [&] { xarjudge::save_pool(pool->value, path); });
}

xj_status xj_pool_to_json(const xj_pool* pool, char** out_json) {
    if (pool == nullptr || out_json == nullptr) return XJ_E_INVALID_ARG;
    return guarded(nullptr, [&] { *out_json = dup_string(xarjudge::pool_to_json(pool->value)); });
}

xj_status xj_pool_validate(const xj_pool* pool, char** out_report_json) {
    if (pool == nullptr || out_report_json == nullptr) return XJ_E_INVALID_ARG;
    return guarded(nullptr, [&] {
        nlohmann::json report = nlohmann::json::array();
        for (const auto& v : xarjudge::validate_pool(pool->value)) {
            report.push_back({{"window_id", v.window_id}, {"path", v.path},
                              {"message", v.message}});
        }
        *out_report_json = dup_string(report.dump(2) + "\n");
    });
}

int xj_pool_case_count(const xj_pool* pool) {
    return pool == nullptr ? -1 : static_cast<int>(pool->value.cases.size());
}

int xj_pool_model_count(const xj_pool* pool) {
    return pool == nullptr ? -1 : static_cast<int>(pool->value.roster.model_ids.size());
}

void xj_pool_free(xj_pool* pool) { delete pool; }

xj_status xj_synth_pool(const char* const* model_ids, int n_models,
                        const char* const* activities, int n_activities, int per_activity,
                        uint64_t seed, const char* const* quality_order, int n_quality,
                        xj_pool** out_pool, char** out_oracle_json, char** errmsg) {
    if (model_ids == nullptr || activities == nullptr || quality_order == nullptr) {
        set_err(errmsg, "model_ids, activities and quality_order must not be null");
        return XJ_E_INVALID_ARG;
    }
    return guarded(errmsg, [&] {
        xarjudge::ModelRoster roster{to_string_vector(model_ids, n_models),
                                     to_string_vector(activities, n_activities)};
        xarjudge::SynthResult result = xarjudge::generate_synthetic_pool(
            roster, per_activity, seed, to_string_vector(quality_order, n_quality));
        if (out_oracle_json != nullptr) {
            *out_oracle_json = dup_string(xarjudge::oracle_to_json(result.oracle));
        }
        if (out_pool != nullptr) *out_pool = new xj_pool{std::move(result.pool)};
    });
}

/* ------------------------------------------------------------------ */

xj_config* xj_config_new(void) {
    try {
        return new xj_config{};
    } catch (...) {
        return nullptr;
    }
}

void xj_config_free(xj_config* config) { delete config; }

xj_status xj_config_set_strategy(xj_config* config, xj_strategy strategy) {
    if (config == nullptr) return XJ_E_INVALID_ARG;
    switch (strategy) {
        case XJ_STRATEGY_BEST_AMONG_K:
            config->run.strategy = xarjudge::Strategy::BestAmongK;
            return XJ_OK;
        case XJ_STRATEGY_LIKERT:
            config->run.strategy = xarjudge::Strategy::LikertScoring;
            return XJ_OK;
    }
    return XJ_E_INVALID_ARG;
}

xj_status xj_config_set_backend(xj_config* config, xj_backend backend) {
    if (config == nullptr) return XJ_E_INVALID_ARG;
    switch (backend) {
        case XJ_BACKEND_HTTP_CHAT:
            config->judge.backend_kind = xarjudge::BackendKind::HttpChat;
            return XJ_OK;
        case XJ_BACKEND_MOCK:
            config->judge.backend_kind = xarjudge::BackendKind::Mock;
            return XJ_OK;
    }
    return XJ_E_INVALID_ARG;
}

xj_status xj_config_set_model_name(xj_config* config, const char* name) {
    if (config == nullptr || name == nullptr || *name == '\0') return XJ_E_INVALID_ARG;
    config->judge.model_name = name;
    return XJ_OK;
}

xj_status xj_config_set_base_url(xj_config* config, const char* base_url) {
    if (config == nullptr || base_url == nullptr || *base_url == '\0') return XJ_E_INVALID_ARG;
    config->judge.base_url = base_url;
    return XJ_OK;
}

xj_status xj_config_set_temperature(xj_config* config, double temperature) {
    if (config == nullptr || temperature < 0.0) return XJ_E_INVALID_ARG;
    config->judge.temperature = temperature;
    return XJ_OK;
}

xj_status xj_config_set_repetitions(xj_config* config, int repetitions) {
    if (config == nullptr || repetitions < 1) return XJ_E_INVALID_ARG;
    config->run.repetitions = repetitions;
    return XJ_OK;
}

xj_status xj_config_set_parallelism(xj_config* config, int parallelism) {
    if (config == nullptr || parallelism < 1) return XJ_E_INVALID_ARG;
    config->judge.parallelism = parallelism;
    return XJ_OK;
}

xj_status xj_config_set_max_attempts(xj_config* config, int max_attempts) {
    if (config == nullptr || max_attempts < 1) return XJ_E_INVALID_ARG;
    config->judge.max_attempts = max_attempts;
    return XJ_OK;
}

xj_status xj_config_set_timeout_seconds(xj_config* config, double seconds) {
    if (config == nullptr || !(seconds > 0.0)) return XJ_E_INVALID_ARG;
    config->judge.timeout_seconds = seconds;
    return XJ_OK;
}

xj_status xj_config_set_seed(xj_config* config, uint64_t seed) {
    if (config == nullptr) return XJ_E_INVALID_ARG;
    config->run.seed = seed;
    return XJ_OK;
}

xj_status xj_config_set_skip_failed(xj_config* config, int enabled) {
    if (config == nullptr) return XJ_E_INVALID_ARG;
    config->run.skip_failed = enabled != 0;
    return XJ_OK;
}

xj_status xj_config_set_shuffle_options(xj_config* config, int enabled) {
    if (config == nullptr) return XJ_E_INVALID_ARG;
    config->run.shuffle_options = enabled != 0;
    return XJ_OK;
}

xj_status xj_config_set_template_file(xj_config* config, const char* path, char** errmsg) {
    if (config == nullptr || path == nullptr) {
        set_err(errmsg, "config and path must not be null");
        return XJ_E_INVALID_ARG;
    }
    return guarded(errmsg, [&] { config->tmpl = xarjudge::PromptTemplate::from_file(path); });
}

xj_status xj_config_set_oracle_file(xj_config* config, const char* path, char** errmsg) {
    if (config == nullptr || path == nullptr) {
        set_err(errmsg, "config and path must not be null");
        return XJ_E_INVALID_ARG;
    }
    return guarded(errmsg, [&] {
        config->judge.oracle = xarjudge::load_oracle(path);
        config->judge.has_oracle = true;
    });
}

xj_status xj_config_set_oracle_json(xj_config* config, const char* json_text, char** errmsg) {
    if (config == nullptr || json_text == nullptr) {
        set_err(errmsg, "config and json_text must not be null");
        return XJ_E_INVALID_ARG;
    }
    return guarded(errmsg, [&] {
        config->judge.oracle = xarjudge::oracle_from_json(json_text);
        config->judge.has_oracle = true;
    });
}

/* ------------------------------------------------------------------ */

xj_status xj_evaluate(const xj_pool* pool, const xj_config* config, xj_board** out,
                      char** errmsg) {
    if (pool == nullptr || config == nullptr || out == nullptr) {
        set_err(errmsg, "pool, config and out must not be null");
        return XJ_E_INVALID_ARG;
    }
    return guarded(errmsg, [&] {
        *out = new xj_board{
            xarjudge::run_evaluation(pool->value, config->run, config->judge, config->tmpl)};
    });
}

void xj_board_free(xj_board* board) { delete board; }

xj_status xj_board_save(const xj_board* board, const xj_comparison* comparison_or_null,
                        const char* path, char** errmsg) {
    if (board == nullptr || path == nullptr) {
        set_err(errmsg, "board and path must not be null");
        return XJ_E_INVALID_ARG;
    }
    return guarded(errmsg, [&] {
        xarjudge::save_report(board->value,
                              comparison_or_null == nullptr ? nullptr : &comparison_or_null->value,
                              path);
    });
}

xj_status xj_board_load(const char* path, xj_board** out, char** errmsg) {
    if (path == nullptr || out == nullptr) {
        set_err(errmsg, "path and out must not be null");
        return XJ_E_INVALID_ARG;
    }
    return guarded(errmsg, [&] { *out = new xj_board{xarjudge::load_report(path)}; });
}

xj_status xj_board_to_json(const xj_board* board, const xj_comparison* comparison_or_null,
                           char** out_json) {
    if (board == nullptr || out_json == nullptr) return XJ_E_INVALID_ARG;
    return guarded(nullptr, [&] {
        *out_json = dup_string(xarjudge::report_to_json(
            board->value,
            comparison_or_null == nullptr ? nullptr : &comparison_or_null->value));
    });
}

xj_status xj_render_report(const xj_board* board, const xj_comparison* comparison_or_null,
                           char** out_text) {
    if (board == nullptr || out_text == nullptr) return XJ_E_INVALID_ARG;
    return guarded(nullptr, [&] {
        *out_text = dup_string(xarjudge::render_report(
            board->value,
            comparison_or_null == nullptr ? nullptr : &comparison_or_null->value));
    });
}

/* ------------------------------------------------------------------ */

xj_status xj_survey_load(const char* path, xj_survey** out, char** errmsg) {
    if (path == nullptr || out == nullptr) {
        set_err(errmsg, "path and out must not be null");
        return XJ_E_INVALID_ARG;
    }
    return guarded(errmsg, [&] { *out = new xj_survey{xarjudge::load_survey(path)}; });
}

xj_status xj_survey_from_json(const char* json_text, xj_survey** out, char** errmsg) {
    if (json_text == nullptr || out == nullptr) {
        set_err(errmsg, "json_text and out must not be null");
        return XJ_E_INVALID_ARG;
    }
    return guarded(errmsg, [&] { *out = new xj_survey{xarjudge::survey_from_json(json_text)}; });
}

void xj_survey_free(xj_survey* survey) { delete survey; }

xj_status xj_compare(const xj_board* board, const xj_survey* survey, xj_comparison** out,
                     char** errmsg) {
    if (board == nullptr || survey == nullptr || out == nullptr) {
        set_err(errmsg, "board, survey and out must not be null");
        return XJ_E_INVALID_ARG;
    }
    return guarded(errmsg, [&] {
        *out = new xj_comparison{xarjudge::compare(board->value, survey->value)};
    });
}

void xj_comparison_free(xj_comparison* comparison) { delete comparison; }

xj_status xj_comparison_to_json(const xj_comparison* comparison, char** out_json) {
    if (comparison == nullptr || out_json == nullptr) return XJ_E_INVALID_ARG;
    return guarded(nullptr, [&] {
        const xarjudge::ComparisonReport& c = comparison->value;
        nlohmann::json doc{{"dataset_name", c.dataset_name},
                           {"participant_count", c.participant_count},
                           {"kendall_tau", c.kendall_tau},
                           {"exact_rank_match", c.exact_rank_match},
                           {"llm_ranking", c.llm_ranking},
                           {"survey_ranking", c.survey_ranking},
                           {"survey_tie", c.survey_tie},
                           {"per_model_delta", c.per_model_delta}};
        *out_json = dup_string(doc.dump(2) + "\n");
    });
}

double xj_comparison_tau(const xj_comparison* comparison) {
    return comparison == nullptr ? 0.0 : comparison->value.kendall_tau;
}

int xj_comparison_exact_match(const xj_comparison* comparison) {
    if (comparison == nullptr) return 0;
    return comparison->value.exact_rank_match ? 1 : 0;
}

} /* extern "C" */
