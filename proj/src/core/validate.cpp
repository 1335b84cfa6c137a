#include "core/validate.hpp"

#include <set>
#include <string>

namespace xarjudge {

namespace {

std::string case_path(std::size_t i) { return "cases[" + std::to_string(i) + "]"; }

std::string trimmed(const std::string& s) {
    auto begin = s.find_first_not_of(" \t\r\n\f\v");
    if (begin == std::string::npos) return {};
    auto end = s.find_last_not_of(" \t\r\n\f\v");
    return s.substr(begin, end - begin + 1);
}

} // namespace

std::vector<Violation> validate_pool(const EvaluationPool& pool) {
    std::vector<Violation> out;
    auto add = [&out](std::string window_id, std::string path, std::string message) {
        out.push_back({std::move(window_id), std::move(path), std::move(message)});
    };

    const ModelRoster& roster = pool.roster;

    if (roster.model_ids.empty()) {
        add("", "roster.model_ids", "roster must contain at least one model");
    }
    std::set<std::string> model_set;
    for (std::size_t i = 0; i < roster.model_ids.size(); ++i) {
        const std::string& id = roster.model_ids[i];
        if (id.empty()) {
            add("", "roster.model_ids[" + std::to_string(i) + "]", "model id is empty");
        }
        if (!model_set.insert(id).second) {
            add("", "roster.model_ids[" + std::to_string(i) + "]", "duplicate model id '" + id + "'");
        }
    }

    if (roster.activity_set.empty()) {
        add("", "roster.activity_set", "activity set is empty");
    }
    std::set<std::string> activity_set;
    for (std::size_t i = 0; i < roster.activity_set.size(); ++i) {
        const std::string& a = roster.activity_set[i];
        if (a.empty()) {
            add("", "roster.activity_set[" + std::to_string(i) + "]", "activity label is empty");
        }
        if (!activity_set.insert(a).second) {
            add("", "roster.activity_set[" + std::to_string(i) + "]", "duplicate activity '" + a + "'");
        }
    }

    if (pool.cases.empty()) {
        add("", "cases", "empty pool: at least one window case is required");
    }

    std::set<std::string> seen_window_ids;
    for (std::size_t ci = 0; ci < pool.cases.size(); ++ci) {
        const WindowCase& c = pool.cases[ci];
        const EventWindow& w = c.window;
        const std::string base = case_path(ci);

        if (w.window_id.empty()) {
            add(w.window_id, base + ".window.window_id", "window id is empty");
        } else if (!seen_window_ids.insert(w.window_id).second) {
            add(w.window_id, base + ".window.window_id",
                "duplicate window id '" + w.window_id + "'");
        }

        if (!(w.duration_seconds > 0.0)) {
            add(w.window_id, base + ".window.duration_seconds", "duration must be positive");
        }

        if (!roster.contains_activity(w.predicted_activity)) {
            add(w.window_id, base + ".window.predicted_activity",
                "predicted activity '" + w.predicted_activity + "' is not in the roster's activity set");
        }

        double previous_offset = 0.0;
        for (std::size_t ei = 0; ei < w.events.size(); ++ei) {
            const HighLevelEvent& e = w.events[ei];
            const std::string epath = base + ".window.events[" + std::to_string(ei) + "]";
            if (e.name.empty()) {
                add(w.window_id, epath + ".name", "event name is empty");
            }
            if (e.offset_seconds < 0.0) {
                add(w.window_id, epath + ".offset_seconds", "event offset is negative");
            }
            if (e.offset_seconds > w.duration_seconds) {
                add(w.window_id, epath + ".offset_seconds",
                    "event offset exceeds the window duration");
            }
            if (ei > 0 && e.offset_seconds < previous_offset) {
                add(w.window_id, epath + ".offset_seconds",
                    "events are not sorted by offset");
            }
            previous_offset = e.offset_seconds;
        }

        // Exactly one candidate per roster model, no extras.
        std::map<std::string, int> per_model;
        for (std::size_t pi = 0; pi < c.candidates.size(); ++pi) {
            const ExplanationCandidate& cand = c.candidates[pi];
            const std::string cpath = base + ".candidates[" + std::to_string(pi) + "]";
            if (!roster.contains_model(cand.model_id)) {
                add(w.window_id, cpath + ".model_id",
                    "candidate model '" + cand.model_id + "' is not in the roster");
            } else {
                per_model[cand.model_id] += 1;
            }
            if (trimmed(cand.text).empty()) {
                add(w.window_id, cpath + ".text", "explanation text is empty");
            }
        }
        for (const std::string& id : roster.model_ids) {
            auto it = per_model.find(id);
            if (it == per_model.end()) {
                add(w.window_id, base + ".candidates",
                    "missing explanation from model '" + id + "'");
            } else if (it->second > 1) {
                add(w.window_id, base + ".candidates",
                    "model '" + id + "' appears " + std::to_string(it->second) + " times");
            }
        }
    }

    return out;
}

} // namespace xarjudge
