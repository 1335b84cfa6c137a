#include <doctest.h>

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include <httplib.h>
#include <json.hpp>

#include "core/errors.hpp"
#include "core/judge.hpp"
#include "core/pool_io.hpp"
#include "core/prompt.hpp"
#include "core/scoring.hpp"
#include "support/checks.hpp"

using namespace xarjudge;

namespace {

PromptBundle bundle_of(Strategy strategy, const std::vector<UniqueOption>& options) {
    PromptBundle b;
    b.strategy = strategy;
    b.system_message = "system";
    b.user_message = "user";
    b.options = options;
    b.window_id = "w1";
    return b;
}

std::string last_line(const std::string& text) {
    std::string trimmed = text;
    while (!trimmed.empty() && trimmed.back() == '\n') trimmed.pop_back();
    std::size_t pos = trimmed.rfind('\n');
    return pos == std::string::npos ? trimmed : trimmed.substr(pos + 1);
}

} // namespace

TEST_CASE("quality oracle ranks and tiers") {
    QualityOracle oracle = QualityOracle::from_order({"a", "b", "c"});
    CHECK(oracle.rank_of("a") == 0);
    CHECK(oracle.rank_of("c") == 2);
    CHECK(oracle.tier_of("a") == 0);
    CHECK(oracle.tier_of("b") == 1);
    CHECK(oracle.tier_of("c") == 2);
    CHECK(error_code_of([&] { oracle.rank_of("zz"); }) == ErrorCode::UnknownModel);
    CHECK(error_code_of([&] { oracle.tier_of("zz"); }) == ErrorCode::UnknownModel);

    // Ranks spread evenly over the three tiers for other roster sizes.
    QualityOracle five = QualityOracle::from_order({"a", "b", "c", "d", "e"});
    CHECK(five.tier_of("a") == 0);
    CHECK(five.tier_of("b") == 0);
    CHECK(five.tier_of("c") == 1);
    CHECK(five.tier_of("d") == 1);
    CHECK(five.tier_of("e") == 2);
    QualityOracle one = QualityOracle::from_order({"solo"});
    CHECK(one.tier_of("solo") == 0);
}

TEST_CASE("mock judge picks the option with the best-ranked contributor") {
    QualityOracle oracle = QualityOracle::from_order({"m1", "m2", "m3"});

    std::vector<UniqueOption> options = {{"A", "specific", {"m1"}}, {"B", "vague", {"m3"}}};
    std::string raw = mock_judge(bundle_of(Strategy::BestAmongK, options), oracle);
    CHECK(last_line(raw) == "FINAL: A");

    // Independent re-derivation of the oracle rule: the winning option is the
    // one whose contributor has the smallest index in quality_order.
    int expected_best = 0;
    int best_rank = 999;
    for (std::size_t i = 0; i < options.size(); ++i) {
        for (const std::string& id : options[i].contributors) {
            for (std::size_t r = 0; r < oracle.quality_order.size(); ++r) {
                if (oracle.quality_order[r] == id && static_cast<int>(r) < best_rank) {
                    best_rank = static_cast<int>(r);
                    expected_best = static_cast<int>(i);
                }
            }
        }
    }
    CHECK(options[expected_best].label == "A");

    // Position must not matter, only the oracle rank.
    std::vector<UniqueOption> swapped = {{"A", "vague", {"m3"}}, {"B", "specific", {"m1"}}};
    CHECK(last_line(mock_judge(bundle_of(Strategy::BestAmongK, swapped), oracle)) ==
          "FINAL: B");
}

TEST_CASE("mock judge maps tiers onto likert scores 5/3/1") {
    QualityOracle oracle = QualityOracle::from_order({"m1", "m2", "m3"});
    std::vector<UniqueOption> options = {
        {"A", "best", {"m1"}}, {"B", "mid", {"m2"}}, {"C", "worst", {"m3"}}};
    std::string raw = mock_judge(bundle_of(Strategy::LikertScoring, options), oracle);
    CHECK(last_line(raw) == "SCORES: A=5; B=3; C=1");
}

TEST_CASE("mock judge degenerate single option") {
    QualityOracle oracle = QualityOracle::from_order({"m1", "m2"});
    std::vector<UniqueOption> options = {{"A", "only", {"m1", "m2"}}};
    CHECK(last_line(mock_judge(bundle_of(Strategy::BestAmongK, options), oracle)) ==
          "FINAL: A");
    CHECK(last_line(mock_judge(bundle_of(Strategy::LikertScoring, options), oracle)) ==
          "SCORES: A=5");
}

TEST_CASE("mock judge is deterministic and always parseable") {
    QualityOracle oracle = QualityOracle::from_order({"m1", "m2", "m3"});
    std::vector<UniqueOption> options = {{"A", "x", {"m2"}}, {"B", "y", {"m1", "m3"}}};
    for (Strategy strategy : {Strategy::BestAmongK, Strategy::LikertScoring}) {
        PromptBundle bundle = bundle_of(strategy, options);
        std::string first = mock_judge(bundle, oracle);
        std::string second = mock_judge(bundle, oracle);
        CHECK(first == second);
        CHECK_NOTHROW(parse_verdict(first, strategy, {"A", "B"}));
        CHECK(first.find("step by step") != std::string::npos);
    }
}

TEST_CASE("mock judge reports contributors missing from the oracle") {
    QualityOracle oracle = QualityOracle::from_order({"m1"});
    std::vector<UniqueOption> options = {{"A", "x", {"intruder"}}};
    CHECK(error_code_of([&] {
              mock_judge(bundle_of(Strategy::BestAmongK, options), oracle);
          }) == ErrorCode::UnknownModel);
}

TEST_CASE("config validation") {
    JudgeConfig config; // mock by default
    CHECK(error_code_of([&] { make_backend(config); }) == ErrorCode::InvalidArgument);

    config.oracle = QualityOracle::from_order({"m1"});
    config.has_oracle = true;
    CHECK_NOTHROW(make_backend(config));

    JudgeConfig bad = config;
    bad.temperature = -0.5;
    CHECK(error_code_of([&] { validate_config(bad); }) == ErrorCode::InvalidArgument);
    bad = config;
    bad.max_attempts = 0;
    CHECK(error_code_of([&] { validate_config(bad); }) == ErrorCode::InvalidArgument);
    bad = config;
    bad.parallelism = 0;
    CHECK(error_code_of([&] { validate_config(bad); }) == ErrorCode::InvalidArgument);
    bad = config;
    bad.timeout_seconds = 0.0;
    CHECK(error_code_of([&] { validate_config(bad); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("mock backend answers through the JudgeBackend interface") {
    JudgeConfig config;
    config.backend_kind = BackendKind::Mock;
    config.oracle = QualityOracle::from_order({"m1", "m2"});
    config.has_oracle = true;
    auto backend = make_backend(config);

    std::vector<UniqueOption> options = {{"A", "x", {"m1"}}, {"B", "y", {"m2"}}};
    JudgeResponse r = backend->complete(bundle_of(Strategy::BestAmongK, options));
    CHECK(r.attempt_count == 1);
    CHECK(last_line(r.raw_text) == "FINAL: A");
}

// ---------------------------------------------------------------------------
// HTTP backend against a local stub server.

namespace {

class StubServer {
public:
    template <typename Handler>
    explicit StubServer(Handler handler) {
        server_.Post("/v1/chat/completions", handler);
        port_ = server_.bind_to_any_port("127.0.0.1");
        thread_ = std::thread([this] { server_.listen_after_bind(); });
        server_.wait_until_ready();
    }

    ~StubServer() {
        server_.stop();
        thread_.join();
    }

    std::string base_url() const { return "http://127.0.0.1:" + std::to_string(port_) + "/v1"; }

private:
    httplib::Server server_;
    int port_ = 0;
    std::thread thread_;
};

std::string completion_body(const std::string& content) {
    nlohmann::json doc = {{"choices", {{{"message", {{"content", content}}}}}}};
    return doc.dump();
}

JudgeConfig http_config(const std::string& base_url) {
    JudgeConfig config;
    config.backend_kind = BackendKind::HttpChat;
    config.base_url = base_url;
    config.retry_backoff_ms = 1;
    config.timeout_seconds = 10.0;
    return config;
}

struct EnvKeyGuard {
    EnvKeyGuard() { setenv(kApiKeyEnvVar, "test-key-not-a-secret", 1); }
    ~EnvKeyGuard() { unsetenv(kApiKeyEnvVar); }
};

} // namespace

TEST_CASE("http backend sends the chat-completions wire format") {
    EnvKeyGuard key;
    std::mutex seen_mutex;
    nlohmann::json seen_body;
    std::string seen_auth;
    StubServer stub([&](const httplib::Request& req, httplib::Response& res) {
        std::lock_guard<std::mutex> lock(seen_mutex);
        seen_body = nlohmann::json::parse(req.body);
        seen_auth = req.get_header_value("Authorization");
        res.set_content(completion_body("ok FINAL: A"), "application/json");
    });

    auto backend = make_backend(http_config(stub.base_url()));
    std::vector<UniqueOption> options = {{"A", "x", {"m1"}}};
    PromptBundle bundle = bundle_of(Strategy::BestAmongK, options);
    bundle.system_message = "you are the judge";
    bundle.user_message = "candidates: A) x";
    JudgeResponse r = backend->complete(bundle);

    CHECK(r.raw_text == "ok FINAL: A");
    CHECK(r.attempt_count == 1);
    std::lock_guard<std::mutex> lock(seen_mutex);
    CHECK(seen_auth == "Bearer test-key-not-a-secret");
    CHECK(seen_body["model"] == "gpt-4-turbo");
    CHECK(seen_body["temperature"] == 0.0);
    REQUIRE(seen_body["messages"].size() == 2);
    CHECK(seen_body["messages"][0]["role"] == "system");
    CHECK(seen_body["messages"][0]["content"] == "you are the judge");
    CHECK(seen_body["messages"][1]["role"] == "user");
    CHECK(seen_body["messages"][1]["content"] == "candidates: A) x");
}

TEST_CASE("http backend retries transient failures then succeeds") {
    EnvKeyGuard key;
    std::atomic<int> calls{0};
    StubServer stub([&](const httplib::Request&, httplib::Response& res) {
        if (calls.fetch_add(1) == 0) {
            res.status = 429;
            res.set_content("rate limited", "text/plain");
        } else {
            res.set_content(completion_body("FINAL: A"), "application/json");
        }
    });

    auto backend = make_backend(http_config(stub.base_url()));
    JudgeResponse r = backend->complete(bundle_of(Strategy::BestAmongK, {{"A", "x", {"m1"}}}));
    CHECK(r.attempt_count == 2);
    CHECK(calls.load() == 2);
}

TEST_CASE("http backend gives up after max_attempts") {
    EnvKeyGuard key;
    std::atomic<int> calls{0};
    StubServer stub([&](const httplib::Request&, httplib::Response& res) {
        calls.fetch_add(1);
        res.status = 503;
    });

    JudgeConfig config = http_config(stub.base_url());
    config.max_attempts = 3;
    auto backend = make_backend(config);
    CHECK(error_code_of([&] {
              backend->complete(bundle_of(Strategy::BestAmongK, {{"A", "x", {"m1"}}}));
          }) == ErrorCode::BackendUnavailable);
    CHECK(calls.load() == 3);
}

TEST_CASE("http backend never retries an auth rejection") {
    EnvKeyGuard key;
    std::atomic<int> calls{0};
    StubServer stub([&](const httplib::Request&, httplib::Response& res) {
        calls.fetch_add(1);
        res.status = 401;
    });

    auto backend = make_backend(http_config(stub.base_url()));
    CHECK(error_code_of([&] {
              backend->complete(bundle_of(Strategy::BestAmongK, {{"A", "x", {"m1"}}}));
          }) == ErrorCode::AuthFailure);
    CHECK(calls.load() == 1);
}

TEST_CASE("http backend requires the credential env var") {
    unsetenv(kApiKeyEnvVar);
    CHECK(error_code_of([&] { make_backend(http_config("http://127.0.0.1:1/v1")); }) ==
          ErrorCode::AuthFailure);
}

TEST_CASE("http backend flags empty and malformed completions") {
    EnvKeyGuard key;
    std::atomic<bool> empty_mode{true};
    StubServer stub([&](const httplib::Request&, httplib::Response& res) {
        if (empty_mode.load()) {
            res.set_content(completion_body(""), "application/json");
        } else {
            res.set_content("}{ not json", "application/json");
        }
    });

    auto backend = make_backend(http_config(stub.base_url()));
    PromptBundle bundle = bundle_of(Strategy::BestAmongK, {{"A", "x", {"m1"}}});
    CHECK(error_code_of([&] { backend->complete(bundle); }) == ErrorCode::EmptyCompletion);
    empty_mode.store(false);
    CHECK(error_code_of([&] { backend->complete(bundle); }) == ErrorCode::BackendUnavailable);
}

TEST_CASE("evaluation through the http backend respects the parallelism cap") {
    EnvKeyGuard key;
    std::atomic<int> in_flight{0};
    std::atomic<int> max_in_flight{0};
    StubServer stub([&](const httplib::Request&, httplib::Response& res) {
        int now = in_flight.fetch_add(1) + 1;
        int seen = max_in_flight.load();
        while (now > seen && !max_in_flight.compare_exchange_weak(seen, now)) {
        }
        std::this_thread::sleep_for(std::chrono::milliseconds(25));
        in_flight.fetch_sub(1);
        res.set_content(completion_body("FINAL: A"), "application/json");
    });

    EvaluationPool pool;
    pool.roster = {{"m1", "m2"}, {"cooking"}};
    for (int i = 0; i < 8; ++i) {
        WindowCase c;
        c.window.window_id = "w" + std::to_string(i + 1);
        c.window.duration_seconds = 60.0;
        c.window.predicted_activity = "cooking";
        c.candidates = {{"m1", "text a " + std::to_string(i)},
                        {"m2", "text b " + std::to_string(i)}};
        pool.cases.push_back(std::move(c));
    }

    RunOptions run;
    run.strategy = Strategy::BestAmongK;
    run.repetitions = 1;
    JudgeConfig config = http_config(stub.base_url());
    config.parallelism = 3;

    ScoreBoard board = run_evaluation(pool, run, config, PromptTemplate::bundled_default());
    CHECK(board.pool_size == 8);
    CHECK(max_in_flight.load() <= 3);
    CHECK(max_in_flight.load() >= 2); // the cap was actually exercised
    // every window answered "FINAL: A" and m1 contributed every option A
    CHECK(board.raw_totals.at("m1") == 8);
    CHECK(board.raw_totals.at("m2") == 0);
}
