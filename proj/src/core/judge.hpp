#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "core/prompt.hpp"
#include "core/types.hpp"

namespace xarjudge {

/// Hidden quality key produced alongside a synthetic pool. `quality_order`
/// ranks the models best first; `tiers` buckets them into the generator's
/// three explanation-fidelity levels (0 = activity-relevant, 1 = partially
/// relevant, 2 = irrelevant). The mock judge consults it to answer like an
/// ideal rater that knows the ground truth.
struct QualityOracle {
    std::vector<std::string> quality_order;
    std::map<std::string, int> tiers;

    int rank_of(const std::string& model_id) const;
    int tier_of(const std::string& model_id) const;

    /// Derives the oracle for a strict quality ordering, spreading the ranks
    /// evenly over the three tiers (with K <= 3 every model gets its own tier).
    static QualityOracle from_order(const std::vector<std::string>& order);

    bool operator==(const QualityOracle&) const = default;
};

enum class BackendKind {
    HttpChat,
    Mock,
};

/// Judge backend configuration. Temperature defaults to 0 so repeated calls
/// with the same prompt have the least possible variability.
struct JudgeConfig {
    BackendKind backend_kind = BackendKind::Mock;
    std::string model_name = "gpt-4-turbo";
    double temperature = 0.0;
    int max_attempts = 3;
    std::string base_url = "https://api.openai.com/v1";
    double timeout_seconds = 60.0;
    int parallelism = 4;
    int retry_backoff_ms = 250; // doubles after each transient failure

    // Mock backend only.
    bool has_oracle = false;
    QualityOracle oracle;
};

/// Name of the environment variable holding the API credential for the HTTP
/// backend. The value is sent as a bearer token and never logged.
constexpr const char* kApiKeyEnvVar = "XARJUDGE_API_KEY";

struct JudgeResponse {
    std::string raw_text;
    double latency_ms = 0.0;
    int attempt_count = 1;
};

class JudgeBackend {
public:
    virtual ~JudgeBackend() = default;

    /// Returns the judge's completion for the bundle's system + user messages.
    /// Safe to call concurrently. Transient transport failures (rate limit,
    /// server error, timeout) are retried with exponential backoff up to
    /// max_attempts; auth rejections are never retried.
    virtual JudgeResponse complete(const PromptBundle& bundle) = 0;
};

/// Validates the config and constructs the matching backend.
std::unique_ptr<JudgeBackend> make_backend(const JudgeConfig& config);

void validate_config(const JudgeConfig& config);

/// Deterministic oracle-driven completion. BestAmongK picks the option whose
/// best-ranked contributor sits highest in the oracle ordering; LikertScoring
/// maps option tiers onto scores 5 / 3 / 1, so options sharing a tier share a
/// score. Throws UnknownModel if an option's contributor is not in the oracle.
std::string mock_judge(const PromptBundle& bundle, const QualityOracle& oracle);

} // namespace xarjudge
