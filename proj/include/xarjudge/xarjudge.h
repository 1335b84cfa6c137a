/*
 * xarjudge - C API for the LLM-as-judge evaluation harness.
 *
 * The library compares the natural-language explanations produced by rival
 * explainable activity-recognition models: for every window in a pool, a
 * judge (a chat LLM or a deterministic mock) either picks the best candidate
 * explanation or scores each one on a 1-5 scale; per-model scores are
 * accumulated, normalized into [0,1] and turned into a ranking that can be
 * checked against a human-survey baseline.
 *
 * Conventions:
 *   - Opaque handles (xj_pool, xj_config, ...) are created and destroyed by
 *     the matching xj_*_free function. Handles are not thread-safe unless
 *     noted; distinct handles can be used from distinct threads freely.
 *   - Functions return xj_status; XJ_OK is 0. Fallible operations take an
 *     optional char** errmsg out-parameter that receives a heap-allocated
 *     description on failure. Release it with xj_string_free. Pass NULL if
 *     the message is not wanted.
 *   - char** out-parameters always hand ownership to the caller; release
 *     with xj_string_free.
 */

#ifndef XARJUDGE_H
#define XARJUDGE_H

#include <stdint.h>

#if defined(_WIN32)
#define XJ_API __declspec(dllexport)
#else
#define XJ_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum xj_status {
    XJ_OK = 0,
    XJ_E_IO = 1,                /* file missing, unreadable or unwritable */
    XJ_E_MALFORMED = 2,         /* document is not valid JSON / template text */
    XJ_E_SCHEMA = 3,            /* missing, extra or mistyped fields */
    XJ_E_INVARIANT = 4,         /* value-level invariant violated */
    XJ_E_INVALID_ARG = 5,       /* bad parameter or quality order */
    XJ_E_TEMPLATE = 6,          /* prompt template lacks a required placeholder */
    XJ_E_BACKEND = 7,           /* judge backend unavailable after retries */
    XJ_E_AUTH = 8,              /* credential missing or rejected; never retried */
    XJ_E_EMPTY_COMPLETION = 9,  /* judge returned no usable text */
    XJ_E_PARSE = 10,            /* verdict could not be parsed after retries */
    XJ_E_MODEL_SET_MISMATCH = 11, /* board and survey cover different models */
    XJ_E_INTERNAL = 12
} xj_status;

typedef enum xj_strategy {
    XJ_STRATEGY_BEST_AMONG_K = 0,
    XJ_STRATEGY_LIKERT = 1
} xj_strategy;

typedef enum xj_backend {
    XJ_BACKEND_HTTP_CHAT = 0,
    XJ_BACKEND_MOCK = 1
} xj_backend;

typedef struct xj_pool xj_pool;
typedef struct xj_config xj_config;
typedef struct xj_board xj_board;
typedef struct xj_survey xj_survey;
typedef struct xj_comparison xj_comparison;

/* ------------------------------------------------------------------ */
/* library                                                             */

XJ_API const char* xj_version(void);
XJ_API const char* xj_status_name(xj_status status);
XJ_API void xj_string_free(char* s);

/* ------------------------------------------------------------------ */
/* pools                                                               */

/* Loads a pool document and requires it to pass validation. */
XJ_API xj_status xj_pool_load(const char* path, xj_pool** out, char** errmsg);

/* Loads a pool checking syntax and schema only; invariant violations are
 * left for xj_pool_validate to report. */
XJ_API xj_status xj_pool_load_lenient(const char* path, xj_pool** out, char** errmsg);

XJ_API xj_status xj_pool_from_json(const char* json_text, xj_pool** out, char** errmsg);
XJ_API xj_status xj_pool_save(const xj_pool* pool, const char* path, char** errmsg);
XJ_API xj_status xj_pool_to_json(const xj_pool* pool, char** out_json);

/* Writes a JSON array of violations into *out_report_json; "[]" means the
 * pool is valid. Each entry has window_id, path and message fields. */
XJ_API xj_status xj_pool_validate(const xj_pool* pool, char** out_report_json);

XJ_API int xj_pool_case_count(const xj_pool* pool);
XJ_API int xj_pool_model_count(const xj_pool* pool);
XJ_API void xj_pool_free(xj_pool* pool);

/* Generates an activity-balanced synthetic pool plus the hidden quality key
 * the mock judge consumes. quality_order must be a permutation of model_ids.
 * Deterministic for a fixed seed. Either out-parameter may be NULL. */
XJ_API xj_status xj_synth_pool(const char* const* model_ids, int n_models,
                               const char* const* activities, int n_activities,
                               int per_activity, uint64_t seed,
                               const char* const* quality_order, int n_quality,
                               xj_pool** out_pool, char** out_oracle_json, char** errmsg);

/* ------------------------------------------------------------------ */
/* evaluation configuration                                            */

/* Defaults: mock backend, strategy best-among-k, model "gpt-4-turbo",
 * temperature 0, 5 repetitions, parallelism 4, max 3 attempts, 60 s timeout,
 * seed 0, bundled prompt template. The http backend reads its credential
 * from the XARJUDGE_API_KEY environment variable. */
XJ_API xj_config* xj_config_new(void);
XJ_API void xj_config_free(xj_config* config);

XJ_API xj_status xj_config_set_strategy(xj_config* config, xj_strategy strategy);
XJ_API xj_status xj_config_set_backend(xj_config* config, xj_backend backend);
XJ_API xj_status xj_config_set_model_name(xj_config* config, const char* name);
XJ_API xj_status xj_config_set_base_url(xj_config* config, const char* base_url);
XJ_API xj_status xj_config_set_temperature(xj_config* config, double temperature);
XJ_API xj_status xj_config_set_repetitions(xj_config* config, int repetitions);
XJ_API xj_status xj_config_set_parallelism(xj_config* config, int parallelism);
XJ_API xj_status xj_config_set_max_attempts(xj_config* config, int max_attempts);
XJ_API xj_status xj_config_set_timeout_seconds(xj_config* config, double seconds);
XJ_API xj_status xj_config_set_seed(xj_config* config, uint64_t seed);
XJ_API xj_status xj_config_set_skip_failed(xj_config* config, int enabled);
XJ_API xj_status xj_config_set_shuffle_options(xj_config* config, int enabled);

/* Prompt template file with [criteria] / [best_among_k] / [likert] / [user]
 * sections; replaces the bundled default. */
XJ_API xj_status xj_config_set_template_file(xj_config* config, const char* path,
                                             char** errmsg);

/* Quality oracle for the mock backend, as a file or a JSON string. */
XJ_API xj_status xj_config_set_oracle_file(xj_config* config, const char* path, char** errmsg);
XJ_API xj_status xj_config_set_oracle_json(xj_config* config, const char* json_text,
                                           char** errmsg);

/* ------------------------------------------------------------------ */
/* evaluation and reports                                              */

/* Runs the full evaluation over the pool and returns the finalized board:
 * raw totals, normalized scores, per-repetition statistics, ranking and
 * winner(s). */
XJ_API xj_status xj_evaluate(const xj_pool* pool, const xj_config* config, xj_board** out,
                             char** errmsg);

XJ_API void xj_board_free(xj_board* board);
XJ_API xj_status xj_board_save(const xj_board* board, const xj_comparison* comparison_or_null,
                               const char* path, char** errmsg);
XJ_API xj_status xj_board_load(const char* path, xj_board** out, char** errmsg);
XJ_API xj_status xj_board_to_json(const xj_board* board,
                                  const xj_comparison* comparison_or_null, char** out_json);

/* Human-readable report table, optionally with the comparison block. */
XJ_API xj_status xj_render_report(const xj_board* board,
                                  const xj_comparison* comparison_or_null, char** out_text);

/* ------------------------------------------------------------------ */
/* survey baselines and ranking comparison                             */

XJ_API xj_status xj_survey_load(const char* path, xj_survey** out, char** errmsg);
XJ_API xj_status xj_survey_from_json(const char* json_text, xj_survey** out, char** errmsg);
XJ_API void xj_survey_free(xj_survey* survey);

/* Compares the board's ranking against the survey's: Kendall tau, exact
 * match flag and per-model normalized deltas. Fails with
 * XJ_E_MODEL_SET_MISMATCH when the two cover different model ids. */
XJ_API xj_status xj_compare(const xj_board* board, const xj_survey* survey,
                            xj_comparison** out, char** errmsg);

XJ_API void xj_comparison_free(xj_comparison* comparison);
XJ_API xj_status xj_comparison_to_json(const xj_comparison* comparison, char** out_json);
XJ_API double xj_comparison_tau(const xj_comparison* comparison);
XJ_API int xj_comparison_exact_match(const xj_comparison* comparison);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* XARJUDGE_H */
