#include "core/types.hpp"

#include <algorithm>

#include "core/errors.hpp"

namespace xarjudge {

const char* strategy_name(Strategy s) {
    switch (s) {
    case Strategy::BestAmongK: return "best_among_k";
    case Strategy::LikertScoring: return "likert";
    }
    return "unknown";
}

Strategy strategy_from_name(std::string_view name) {
    if (name == "best_among_k" || name == "best") return Strategy::BestAmongK;
    if (name == "likert" || name == "likert_scoring") return Strategy::LikertScoring;
    throw Error(ErrorCode::InvalidArgument,
                "unknown strategy '" + std::string(name) + "' (expected 'best' or 'likert')");
}

bool ModelRoster::contains_model(std::string_view id) const {
    return std::find(model_ids.begin(), model_ids.end(), id) != model_ids.end();
}

bool ModelRoster::contains_activity(std::string_view activity) const {
    return std::find(activity_set.begin(), activity_set.end(), activity) != activity_set.end();
}

} // namespace xarjudge
