#include "core/prompt.hpp"

#include <cctype>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "core/errors.hpp"

namespace xarjudge {

namespace {

constexpr const char* kDefaultTemplate = R"TPL([criteria]
Judge each explanation the way a non-expert user of the activity monitor would:
- prefer explanations that mention events clearly related to the predicted activity;
- prefer explanations grounded in what happened during the time window, including when it happened, over vague or generic statements;
- penalize explanations that lean on events with no connection to the predicted activity.

[best_among_k]
You are helping a non-expert user of a smart-home activity monitor. The system observed a {duration_seconds}-second window of home sensor events and predicted the activity the resident was performing. Several alternative models each produced an explanation for this same prediction. The user wants to know which explanation is the best.

Evaluation criteria:
{criteria}

{format_instruction}

[likert]
You are helping a non-expert user of a smart-home activity monitor. The system observed a {duration_seconds}-second window of home sensor events and predicted the activity the resident was performing. Several alternative models each produced an explanation for this same prediction. The user wants to know how satisfying each explanation is.

Evaluation criteria:
{criteria}

{format_instruction}

[user]
Predicted activity: {activity}

Candidate explanations:
{options}
)TPL";

std::string read_file_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorCode::FileNotFound, "cannot open template file '" + path + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) {
        throw Error(ErrorCode::IoFailure, "failed reading template file '" + path + "'");
    }
    return buf.str();
}

std::string fnv1a_hex(std::string_view text) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char out[17];
    std::snprintf(out, sizeof(out), "%016llx", static_cast<unsigned long long>(h));
    return out;
}

std::string strip_trailing_blank(std::string s) {
    while (!s.empty() && (s.back() == '\n' || s.back() == '\r')) s.pop_back();
    return s;
}

std::string replace_all(std::string text, std::string_view slot, std::string_view value) {
    std::size_t pos = 0;
    while ((pos = text.find(slot, pos)) != std::string::npos) {
        text.replace(pos, slot.size(), value);
        pos += value.size();
    }
    return text;
}

void require_placeholder(const std::string& section_text, const char* section_name,
                         const char* placeholder) {
    if (section_text.find(placeholder) == std::string::npos) {
        throw Error(ErrorCode::TemplateMissingPlaceholder,
                    std::string("template section [") + section_name +
                        "] is missing required placeholder " + placeholder);
    }
}

std::string format_duration(double seconds) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.10g", seconds);
    return buf;
}

} // namespace

std::string canonicalize(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    bool in_run = false;
    for (char c : text) {
        if (std::isspace(static_cast<unsigned char>(c))) {
            in_run = true;
            continue;
        }
        if (in_run && !out.empty()) out.push_back(' ');
        in_run = false;
        out.push_back(c);
    }
    return out;
}

std::vector<UniqueOption> deduplicate(const WindowCase& window_case, const ModelRoster& roster) {
    std::vector<UniqueOption> options;
    for (const std::string& model_id : roster.model_ids) {
        const ExplanationCandidate* candidate = nullptr;
        for (const ExplanationCandidate& c : window_case.candidates) {
            if (c.model_id == model_id) {
                candidate = &c;
                break;
            }
        }
        if (candidate == nullptr) {
            throw Error(ErrorCode::RosterMismatch,
                        "window '" + window_case.window.window_id +
                            "' has no explanation from model '" + model_id + "'");
        }
        std::string canonical = canonicalize(candidate->text);
        bool merged = false;
        for (UniqueOption& opt : options) {
            if (opt.text == canonical) {
                opt.contributors.push_back(model_id);
                merged = true;
                break;
            }
        }
        if (!merged) {
            if (options.size() >= 26) {
                throw Error(ErrorCode::InvalidArgument,
                            "window '" + window_case.window.window_id +
                                "' has more than 26 distinct explanations; labels A..Z exhausted");
            }
            UniqueOption opt;
            opt.label = std::string(1, static_cast<char>('A' + options.size()));
            opt.text = std::move(canonical);
            opt.contributors = {model_id};
            options.push_back(std::move(opt));
        }
    }
    return options;
}

PromptTemplate PromptTemplate::bundled_default() {
    return from_string(kDefaultTemplate);
}

PromptTemplate PromptTemplate::from_file(const std::string& path) {
    return from_string(read_file_text(path));
}

PromptTemplate PromptTemplate::from_string(std::string text) {
    PromptTemplate tpl;
    tpl.hash_ = fnv1a_hex(text);

    std::string* current = nullptr;
    std::istringstream in(text);
    std::string line;
    bool any_section = false;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line == "[criteria]") {
            current = &tpl.criteria_;
            any_section = true;
            continue;
        }
        if (line == "[best_among_k]") {
            current = &tpl.best_system_;
            any_section = true;
            continue;
        }
        if (line == "[likert]") {
            current = &tpl.likert_system_;
            any_section = true;
            continue;
        }
        if (line == "[user]") {
            current = &tpl.user_;
            any_section = true;
            continue;
        }
        if (current != nullptr) {
            current->append(line);
            current->push_back('\n');
        } else if (!line.empty()) {
            throw Error(ErrorCode::MalformedDocument,
                        "template text before the first section header: '" + line + "'");
        }
    }
    if (!any_section) {
        throw Error(ErrorCode::MalformedDocument,
                    "template has no [best_among_k] / [likert] sections");
    }
    tpl.criteria_ = strip_trailing_blank(tpl.criteria_);
    tpl.best_system_ = strip_trailing_blank(tpl.best_system_);
    tpl.likert_system_ = strip_trailing_blank(tpl.likert_system_);
    tpl.user_ = strip_trailing_blank(tpl.user_);
    return tpl;
}

const std::string& PromptTemplate::system_section(Strategy s) const {
    return s == Strategy::BestAmongK ? best_system_ : likert_system_;
}

std::string format_instruction(Strategy strategy) {
    if (strategy == Strategy::BestAmongK) {
        return "Reason step by step about every candidate explanation before deciding. "
               "After your reasoning, answer with exactly one final line of the form:\n"
               "FINAL: <label>\n"
               "where <label> is the letter of the best explanation (for example: FINAL: A).";
    }
    return "Reason step by step about every candidate explanation before scoring. "
           "Rate each explanation with an integer from 1 to 5, where 1 means not "
           "satisfying at all and 5 means completely satisfying. After your reasoning, "
           "answer with exactly one final line of the form:\n"
           "SCORES: <label>=<score>; <label>=<score>; ...\n"
           "covering every option exactly once (for example: SCORES: A=4; B=2).";
}

PromptBundle build_prompt(Strategy strategy, const WindowCase& window_case,
                          const std::vector<UniqueOption>& options,
                          const PromptTemplate& tmpl) {
    if (options.empty()) {
        throw Error(ErrorCode::InvalidArgument,
                    "cannot build a prompt with no options for window '" +
                        window_case.window.window_id + "'");
    }

    const char* system_name = strategy == Strategy::BestAmongK ? "best_among_k" : "likert";
    const std::string& system_tpl = tmpl.system_section(strategy);
    if (system_tpl.empty()) {
        throw Error(ErrorCode::TemplateMissingPlaceholder,
                    std::string("template has no [") + system_name + "] section");
    }
    require_placeholder(system_tpl, system_name, "{duration_seconds}");
    require_placeholder(system_tpl, system_name, "{criteria}");
    require_placeholder(system_tpl, system_name, "{format_instruction}");
    if (tmpl.user_section().empty()) {
        throw Error(ErrorCode::TemplateMissingPlaceholder, "template has no [user] section");
    }
    require_placeholder(tmpl.user_section(), "user", "{activity}");
    require_placeholder(tmpl.user_section(), "user", "{options}");

    std::string system_message = system_tpl;
    system_message = replace_all(std::move(system_message), "{duration_seconds}",
                                 format_duration(window_case.window.duration_seconds));
    system_message = replace_all(std::move(system_message), "{criteria}", tmpl.criteria());
    system_message =
        replace_all(std::move(system_message), "{format_instruction}", format_instruction(strategy));

    std::ostringstream rendered_options;
    for (std::size_t i = 0; i < options.size(); ++i) {
        if (i > 0) rendered_options << '\n';
        rendered_options << options[i].label << ") " << options[i].text;
    }
    std::string user_message = tmpl.user_section();
    user_message =
        replace_all(std::move(user_message), "{activity}", window_case.window.predicted_activity);
    user_message = replace_all(std::move(user_message), "{options}", rendered_options.str());

    PromptBundle bundle;
    bundle.strategy = strategy;
    bundle.system_message = std::move(system_message);
    bundle.user_message = std::move(user_message);
    bundle.options = options;
    bundle.window_id = window_case.window.window_id;
    return bundle;
}

} // namespace xarjudge
