#include "core/judge.hpp"

#include <chrono>
#include <cstdlib>
#include <sstream>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "core/errors.hpp"
#include "core/verdict.hpp"

namespace xarjudge {

namespace {

constexpr int kTierScores[3] = {5, 3, 1};

// Splits "https://host:port/some/prefix" into origin and path prefix.
std::pair<std::string, std::string> split_base_url(const std::string& base_url) {
    std::size_t scheme_end = base_url.find("://");
    std::size_t path_start =
        base_url.find('/', scheme_end == std::string::npos ? 0 : scheme_end + 3);
    if (path_start == std::string::npos) {
        return {base_url, ""};
    }
    std::string origin = base_url.substr(0, path_start);
    std::string prefix = base_url.substr(path_start);
    while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();
    return {origin, prefix};
}

class MockBackend final : public JudgeBackend {
public:
    explicit MockBackend(QualityOracle oracle) : oracle_(std::move(oracle)) {}

    JudgeResponse complete(const PromptBundle& bundle) override {
        JudgeResponse r;
        r.raw_text = mock_judge(bundle, oracle_);
        r.latency_ms = 0.0;
        r.attempt_count = 1;
        return r;
    }

private:
    QualityOracle oracle_;
};

class HttpChatBackend final : public JudgeBackend {
public:
    explicit HttpChatBackend(JudgeConfig config) : config_(std::move(config)) {
        const char* key = std::getenv(kApiKeyEnvVar);
        if (key == nullptr || *key == '\0') {
            throw Error(ErrorCode::AuthFailure,
                        std::string(kApiKeyEnvVar) + " is not set; the http backend needs a credential");
        }
        api_key_ = key;
    }

    JudgeResponse complete(const PromptBundle& bundle) override {
        nlohmann::json body = {
            {"model", config_.model_name},
            {"temperature", config_.temperature},
            {"messages",
             {{{"role", "system"}, {"content", bundle.system_message}},
              {{"role", "user"}, {"content", bundle.user_message}}}},
        };
        const std::string payload = body.dump();

        auto [origin, prefix] = split_base_url(config_.base_url);
        const std::string path = prefix + "/chat/completions";

        const auto started = std::chrono::steady_clock::now();
        std::string last_failure = "no attempt made";
        for (int attempt = 1; attempt <= config_.max_attempts; ++attempt) {
            if (attempt > 1) {
                int backoff = config_.retry_backoff_ms << (attempt - 2);
                std::this_thread::sleep_for(std::chrono::milliseconds(backoff));
            }

            httplib::Client client(origin);
            client.set_connection_timeout(std::chrono::duration<double>(config_.timeout_seconds));
            client.set_read_timeout(std::chrono::duration<double>(config_.timeout_seconds));
            client.set_write_timeout(std::chrono::duration<double>(config_.timeout_seconds));
            client.set_bearer_token_auth(api_key_);

            httplib::Result res = client.Post(path, payload, "application/json");
            if (!res) {
                last_failure = "transport error: " + httplib::to_string(res.error());
                continue;
            }
            if (res->status == 401 || res->status == 403) {
                throw Error(ErrorCode::AuthFailure,
                            "credential rejected (HTTP " + std::to_string(res->status) + ")");
            }
            if (res->status == 429 || res->status >= 500) {
                last_failure = "HTTP " + std::to_string(res->status);
                continue;
            }
            if (res->status != 200) {
                throw Error(ErrorCode::BackendUnavailable,
                            "unexpected HTTP " + std::to_string(res->status) + ": " + res->body);
            }
            return parse_completion(res->body, attempt, started);
        }
        throw Error(ErrorCode::BackendUnavailable,
                    "gave up after " + std::to_string(config_.max_attempts) +
                        " attempts; last failure: " + last_failure);
    }

private:
    JudgeResponse parse_completion(const std::string& body, int attempt,
                                   std::chrono::steady_clock::time_point started) const {
        nlohmann::json doc = nlohmann::json::parse(body, nullptr, false);
        if (doc.is_discarded()) {
            throw Error(ErrorCode::BackendUnavailable, "response body is not valid JSON");
        }
        std::string content;
        if (doc.contains("choices") && doc["choices"].is_array() && !doc["choices"].empty()) {
            const auto& choice = doc["choices"][0];
            if (choice.contains("message") && choice["message"].contains("content") &&
                choice["message"]["content"].is_string()) {
                content = choice["message"]["content"].get<std::string>();
            }
        }
        if (content.empty()) {
            throw Error(ErrorCode::EmptyCompletion, "completion has no message content");
        }
        JudgeResponse r;
        r.raw_text = std::move(content);
        r.attempt_count = attempt;
        r.latency_ms = std::chrono::duration<double, std::milli>(
                           std::chrono::steady_clock::now() - started)
                           .count();
        return r;
    }

    JudgeConfig config_;
    std::string api_key_;
};

} // namespace

int QualityOracle::rank_of(const std::string& model_id) const {
    for (std::size_t i = 0; i < quality_order.size(); ++i) {
        if (quality_order[i] == model_id) return static_cast<int>(i);
    }
    throw Error(ErrorCode::UnknownModel, "model '" + model_id + "' is not in the quality oracle");
}

int QualityOracle::tier_of(const std::string& model_id) const {
    auto it = tiers.find(model_id);
    if (it == tiers.end()) {
        throw Error(ErrorCode::UnknownModel, "model '" + model_id + "' has no oracle tier");
    }
    return it->second;
}

QualityOracle QualityOracle::from_order(const std::vector<std::string>& order) {
    QualityOracle oracle;
    oracle.quality_order = order;
    const int k = static_cast<int>(order.size());
    for (int rank = 0; rank < k; ++rank) {
        oracle.tiers[order[rank]] = rank * 3 / k;
    }
    return oracle;
}

void validate_config(const JudgeConfig& config) {
    if (config.temperature < 0.0) {
        throw Error(ErrorCode::InvalidArgument, "temperature must be >= 0");
    }
    if (config.max_attempts < 1) {
        throw Error(ErrorCode::InvalidArgument, "max_attempts must be >= 1");
    }
    if (config.parallelism < 1) {
        throw Error(ErrorCode::InvalidArgument, "parallelism must be >= 1");
    }
    if (config.timeout_seconds <= 0.0) {
        throw Error(ErrorCode::InvalidArgument, "timeout_seconds must be positive");
    }
    if (config.backend_kind == BackendKind::Mock && !config.has_oracle) {
        throw Error(ErrorCode::InvalidArgument,
                    "mock backend needs a quality oracle (set one or pass an oracle file)");
    }
}

std::unique_ptr<JudgeBackend> make_backend(const JudgeConfig& config) {
    validate_config(config);
    if (config.backend_kind == BackendKind::Mock) {
        return std::make_unique<MockBackend>(config.oracle);
    }
    return std::make_unique<HttpChatBackend>(config);
}

std::string mock_judge(const PromptBundle& bundle, const QualityOracle& oracle) {
    if (bundle.options.empty()) {
        throw Error(ErrorCode::InvalidArgument, "bundle has no options");
    }

    // Best (lowest) oracle rank among each option's contributors. Contributor
    // sets are disjoint across options, so the minima are all distinct.
    int best_index = 0;
    int best_rank = -1;
    std::vector<int> option_tiers(bundle.options.size(), 0);
    for (std::size_t i = 0; i < bundle.options.size(); ++i) {
        const UniqueOption& opt = bundle.options[i];
        int rank = -1;
        int tier = 2;
        for (const std::string& contributor : opt.contributors) {
            int r = oracle.rank_of(contributor);
            if (rank < 0 || r < rank) {
                rank = r;
                tier = oracle.tier_of(contributor);
            }
        }
        option_tiers[i] = tier;
        if (best_rank < 0 || rank < best_rank) {
            best_rank = rank;
            best_index = static_cast<int>(i);
        }
    }

    std::ostringstream out;
    if (bundle.strategy == Strategy::BestAmongK) {
        out << "Let me compare the candidate explanations step by step. "
               "I look for the option whose cited events are the most relevant "
               "to the predicted activity and the most specific about the window.\n";
        out << "Option " << bundle.options[best_index].label
            << " cites the most activity-relevant events among the candidates.\n";
        JudgeVerdict v;
        v.kind = Strategy::BestAmongK;
        v.chosen_label = bundle.options[best_index].label;
        out << render_final_line(v) << "\n";
    } else {
        out << "Let me rate each candidate explanation step by step, judging how "
               "relevant and specific its cited events are for the predicted activity.\n";
        JudgeVerdict v;
        v.kind = Strategy::LikertScoring;
        for (std::size_t i = 0; i < bundle.options.size(); ++i) {
            v.scores[bundle.options[i].label] = kTierScores[option_tiers[i]];
        }
        out << render_final_line(v) << "\n";
    }
    return out.str();
}

} // namespace xarjudge
