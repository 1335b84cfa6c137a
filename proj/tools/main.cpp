// xarjudge command line. Links the C API only, so it doubles as a working
// example of driving the library from outside.

#include <cstdio>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "xarjudge/xarjudge.h"

namespace {

struct StringFree {
    void operator()(char* s) const { xj_string_free(s); }
};
using OwnedString = std::unique_ptr<char, StringFree>;

struct PoolFree {
    void operator()(xj_pool* p) const { xj_pool_free(p); }
};
using PoolPtr = std::unique_ptr<xj_pool, PoolFree>;

struct ConfigFree {
    void operator()(xj_config* c) const { xj_config_free(c); }
};
using ConfigPtr = std::unique_ptr<xj_config, ConfigFree>;

struct BoardFree {
    void operator()(xj_board* b) const { xj_board_free(b); }
};
using BoardPtr = std::unique_ptr<xj_board, BoardFree>;

struct SurveyFree {
    void operator()(xj_survey* s) const { xj_survey_free(s); }
};
using SurveyPtr = std::unique_ptr<xj_survey, SurveyFree>;

struct ComparisonFree {
    void operator()(xj_comparison* c) const { xj_comparison_free(c); }
};
using ComparisonPtr = std::unique_ptr<xj_comparison, ComparisonFree>;

int exit_code_for(xj_status status) {
    switch (status) {
        case XJ_OK:
            return 0;
        case XJ_E_IO:
        case XJ_E_MALFORMED:
        case XJ_E_SCHEMA:
        case XJ_E_INVARIANT:
        case XJ_E_INVALID_ARG:
        case XJ_E_TEMPLATE:
            return 2;
        case XJ_E_BACKEND:
        case XJ_E_AUTH:
        case XJ_E_EMPTY_COMPLETION:
            return 3;
        case XJ_E_PARSE:
            return 4;
        case XJ_E_MODEL_SET_MISMATCH:
            return 5;
        default:
            return 1;
    }
}

int fail(xj_status status, char* errmsg) {
    OwnedString owned(errmsg);
    std::fprintf(stderr, "xarjudge: error (%s): %s\n", xj_status_name(status),
                 owned ? owned.get() : "unknown failure");
    return exit_code_for(status);
}

// pools/run.json -> pools/run.oracle.json
std::string default_oracle_path(const std::string& pool_path) {
    std::string stem = pool_path;
    const std::string suffix = ".json";
    if (stem.size() > suffix.size() &&
        stem.compare(stem.size() - suffix.size(), suffix.size(), suffix) == 0) {
        stem.resize(stem.size() - suffix.size());
    }
    return stem + ".oracle.json";
}

bool parse_strategy(const std::string& name, xj_strategy* out) {
    if (name == "best" || name == "best_among_k") {
        *out = XJ_STRATEGY_BEST_AMONG_K;
        return true;
    }
    if (name == "likert" || name == "likert_scoring") {
        *out = XJ_STRATEGY_LIKERT;
        return true;
    }
    return false;
}

std::vector<const char*> c_pointers(const std::vector<std::string>& items) {
    std::vector<const char*> out;
    out.reserve(items.size());
    for (const auto& s : items) out.push_back(s.c_str());
    return out;
}

struct EvaluateArgs {
    std::string pool_path;
    std::string strategy = "best";
    std::string backend = "mock";
    std::string model_name;
    std::string base_url;
    std::string template_path;
    std::string oracle_path;
    std::string survey_path;
    std::string out_path;
    int repetitions = 5;
    int parallelism = 4;
    int max_attempts = 3;
    double timeout_seconds = 60.0;
    std::uint64_t seed = 0;
    bool skip_failed = false;
    bool shuffle_options = false;
};

int run_evaluate(const EvaluateArgs& args) {
    xj_strategy strategy;
    if (!parse_strategy(args.strategy, &strategy)) {
        std::fprintf(stderr, "xarjudge: error: unknown strategy '%s' (use best or likert)\n",
                     args.strategy.c_str());
        return 2;
    }
    xj_backend backend;
    if (args.backend == "mock") {
        backend = XJ_BACKEND_MOCK;
    } else if (args.backend == "http") {
        backend = XJ_BACKEND_HTTP_CHAT;
    } else {
        std::fprintf(stderr, "xarjudge: error: unknown backend '%s' (use mock or http)\n",
                     args.backend.c_str());
        return 2;
    }

    char* errmsg = nullptr;
    xj_pool* pool_raw = nullptr;
    xj_status status = xj_pool_load(args.pool_path.c_str(), &pool_raw, &errmsg);
    if (status != XJ_OK) return fail(status, errmsg);
    PoolPtr pool(pool_raw);

    ConfigPtr config(xj_config_new());
    xj_config_set_strategy(config.get(), strategy);
    xj_config_set_backend(config.get(), backend);
    xj_config_set_repetitions(config.get(), args.repetitions);
    xj_config_set_parallelism(config.get(), args.parallelism);
    xj_config_set_max_attempts(config.get(), args.max_attempts);
    xj_config_set_timeout_seconds(config.get(), args.timeout_seconds);
    xj_config_set_seed(config.get(), args.seed);
    xj_config_set_skip_failed(config.get(), args.skip_failed ? 1 : 0);
    xj_config_set_shuffle_options(config.get(), args.shuffle_options ? 1 : 0);
    if (!args.model_name.empty()) xj_config_set_model_name(config.get(), args.model_name.c_str());
    if (!args.base_url.empty()) xj_config_set_base_url(config.get(), args.base_url.c_str());
    if (!args.template_path.empty()) {
        status = xj_config_set_template_file(config.get(), args.template_path.c_str(), &errmsg);
        if (status != XJ_OK) return fail(status, errmsg);
    }
    if (backend == XJ_BACKEND_MOCK) {
        std::string oracle = args.oracle_path.empty() ? default_oracle_path(args.pool_path)
                                                      : args.oracle_path;
        status = xj_config_set_oracle_file(config.get(), oracle.c_str(), &errmsg);
        if (status != XJ_OK) return fail(status, errmsg);
    }

    xj_board* board_raw = nullptr;
    status = xj_evaluate(pool.get(), config.get(), &board_raw, &errmsg);
    if (status != XJ_OK) return fail(status, errmsg);
    BoardPtr board(board_raw);

    ComparisonPtr comparison;
    if (!args.survey_path.empty()) {
        xj_survey* survey_raw = nullptr;
        status = xj_survey_load(args.survey_path.c_str(), &survey_raw, &errmsg);
        if (status != XJ_OK) return fail(status, errmsg);
        SurveyPtr survey(survey_raw);

        xj_comparison* comparison_raw = nullptr;
        status = xj_compare(board.get(), survey.get(), &comparison_raw, &errmsg);
        if (status != XJ_OK) return fail(status, errmsg);
        comparison.reset(comparison_raw);
    }

    char* text = nullptr;
    status = xj_render_report(board.get(), comparison.get(), &text);
    if (status != XJ_OK) return fail(status, nullptr);
    OwnedString report(text);
    std::fputs(report.get(), stdout);

    if (!args.out_path.empty()) {
        status = xj_board_save(board.get(), comparison.get(), args.out_path.c_str(), &errmsg);
        if (status != XJ_OK) return fail(status, errmsg);
    }
    return 0;
}

int run_compare(const std::string& report_path, const std::string& survey_path,
                const std::string& out_path) {
    char* errmsg = nullptr;
    xj_board* board_raw = nullptr;
    xj_status status = xj_board_load(report_path.c_str(), &board_raw, &errmsg);
    if (status != XJ_OK) return fail(status, errmsg);
    BoardPtr board(board_raw);

    xj_survey* survey_raw = nullptr;
    status = xj_survey_load(survey_path.c_str(), &survey_raw, &errmsg);
    if (status != XJ_OK) return fail(status, errmsg);
    SurveyPtr survey(survey_raw);

    xj_comparison* comparison_raw = nullptr;
    status = xj_compare(board.get(), survey.get(), &comparison_raw, &errmsg);
    if (status != XJ_OK) return fail(status, errmsg);
    ComparisonPtr comparison(comparison_raw);

    char* text = nullptr;
    status = xj_render_report(board.get(), comparison.get(), &text);
    if (status != XJ_OK) return fail(status, nullptr);
    OwnedString report(text);
    std::fputs(report.get(), stdout);

    if (!out_path.empty()) {
        status = xj_board_save(board.get(), comparison.get(), out_path.c_str(), &errmsg);
        if (status != XJ_OK) return fail(status, errmsg);
    }
    return 0;
}

int run_synth(const std::vector<std::string>& models, const std::vector<std::string>& activities,
              std::vector<std::string> quality_order, int per_activity, std::uint64_t seed,
              const std::string& out_path) {
    if (quality_order.empty()) quality_order = models;

    std::vector<const char*> model_ptrs = c_pointers(models);
    std::vector<const char*> activity_ptrs = c_pointers(activities);
    std::vector<const char*> quality_ptrs = c_pointers(quality_order);

    char* errmsg = nullptr;
    xj_pool* pool_raw = nullptr;
    char* oracle_json = nullptr;
    xj_status status = xj_synth_pool(
        model_ptrs.data(), static_cast<int>(model_ptrs.size()), activity_ptrs.data(),
        static_cast<int>(activity_ptrs.size()), per_activity, seed, quality_ptrs.data(),
        static_cast<int>(quality_ptrs.size()), &pool_raw, &oracle_json, &errmsg);
    if (status != XJ_OK) return fail(status, errmsg);
    PoolPtr pool(pool_raw);
    OwnedString oracle(oracle_json);

    status = xj_pool_save(pool.get(), out_path.c_str(), &errmsg);
    if (status != XJ_OK) return fail(status, errmsg);

    std::string oracle_path = default_oracle_path(out_path);
    FILE* f = std::fopen(oracle_path.c_str(), "wb");
    if (f == nullptr) {
        std::fprintf(stderr, "xarjudge: error: cannot write '%s'\n", oracle_path.c_str());
        return 2;
    }
    std::fputs(oracle.get(), f);
    std::fclose(f);

    std::printf("wrote %d windows for %d models to %s (oracle: %s)\n",
                xj_pool_case_count(pool.get()), xj_pool_model_count(pool.get()),
                out_path.c_str(), oracle_path.c_str());
    return 0;
}

int run_validate(const std::string& pool_path) {
    char* errmsg = nullptr;
    xj_pool* pool_raw = nullptr;
    xj_status status = xj_pool_load_lenient(pool_path.c_str(), &pool_raw, &errmsg);
    if (status != XJ_OK) return fail(status, errmsg);
    PoolPtr pool(pool_raw);

    char* report_json = nullptr;
    status = xj_pool_validate(pool.get(), &report_json);
    if (status != XJ_OK) return fail(status, nullptr);
    OwnedString report(report_json);

    if (std::string(report.get()).find("\"message\"") != std::string::npos) {
        std::fputs(report.get(), stdout);
        return 2;
    }
    std::printf("OK: %d windows, %d models\n", xj_pool_case_count(pool.get()),
                xj_pool_model_count(pool.get()));
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"LLM-as-judge ranking of explainable activity-recognition models"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(xj_version()));

    EvaluateArgs eval;
    CLI::App* evaluate = app.add_subcommand(
        "evaluate", "Judge every window in a pool and rank the models");
    evaluate->add_option("--pool", eval.pool_path, "Evaluation pool JSON")->required();
    evaluate->add_option("--strategy", eval.strategy, "best or likert (default best)");
    evaluate->add_option("--backend", eval.backend, "mock or http (default mock)");
    evaluate->add_option("--model", eval.model_name, "Judge model name (http backend)");
    evaluate->add_option("--base-url", eval.base_url, "Chat completions endpoint base URL");
    evaluate->add_option("--template", eval.template_path, "Prompt template file");
    evaluate->add_option("--oracle", eval.oracle_path,
                         "Quality oracle for the mock backend (default <pool>.oracle.json)");
    evaluate->add_option("--survey", eval.survey_path, "Survey baseline to compare against");
    evaluate->add_option("--out", eval.out_path, "Write the report JSON here");
    evaluate->add_option("--reps", eval.repetitions, "Repetitions (default 5)");
    evaluate->add_option("--parallelism", eval.parallelism, "Concurrent judge calls (default 4)");
    evaluate->add_option("--max-attempts", eval.max_attempts, "Attempts per window (default 3)");
    evaluate->add_option("--timeout", eval.timeout_seconds, "HTTP timeout in seconds");
    evaluate->add_option("--seed", eval.seed, "Seed for option shuffling");
    evaluate->add_flag("--skip-failed", eval.skip_failed,
                       "Skip windows whose verdict never parses instead of aborting");
    evaluate->add_flag("--shuffle-options", eval.shuffle_options,
                       "Shuffle option order per window (position-bias probe)");

    std::string report_path, survey_path, compare_out;
    CLI::App* compare = app.add_subcommand(
        "compare", "Compare a saved report against a survey baseline");
    compare->add_option("--report", report_path, "Report JSON from evaluate")->required();
    compare->add_option("--survey", survey_path, "Survey baseline JSON")->required();
    compare->add_option("--out", compare_out, "Write report + comparison JSON here");

    std::vector<std::string> models, activities, quality_order;
    int per_activity = 3;
    std::uint64_t synth_seed = 0;
    std::string synth_out;
    CLI::App* synth = app.add_subcommand(
        "synth", "Generate a synthetic pool with a hidden quality ordering");
    synth->add_option("--models", models, "Model ids (comma separated)")
        ->required()
        ->delimiter(',');
    synth->add_option("--activities", activities, "Activity labels (comma separated)")
        ->required()
        ->delimiter(',');
    synth->add_option("--quality-order", quality_order,
                      "Models best first (default: --models order)")
        ->delimiter(',');
    synth->add_option("--per-activity", per_activity, "Windows per activity (default 3)");
    synth->add_option("--seed", synth_seed, "Generator seed");
    synth->add_option("--out", synth_out, "Pool output path")->required();

    std::string validate_pool_path;
    CLI::App* validate = app.add_subcommand("validate", "Check a pool document");
    validate->add_option("--pool", validate_pool_path, "Evaluation pool JSON")->required();

    CLI11_PARSE(app, argc, argv);

    if (evaluate->parsed()) return run_evaluate(eval);
    if (compare->parsed()) return run_compare(report_path, survey_path, compare_out);
    if (synth->parsed()) {
        return run_synth(models, activities, quality_order, per_activity, synth_seed, synth_out);
    }
    if (validate->parsed()) return run_validate(validate_pool_path);
    return 1;
}
