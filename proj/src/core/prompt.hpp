#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "core/types.hpp"

namespace xarjudge {

/// A deduplicated explanation offered to the judge under a letter label.
/// When several models emit the same text it appears once, and every model
/// that produced it is listed as a contributor (in roster order).
struct UniqueOption {
    std::string label; // "A".."Z"
    std::string text;  // canonical form
    std::vector<std::string> contributors;

    bool operator==(const UniqueOption&) const = default;
};

/// The rendered messages for one window, ready to send to a judge backend.
struct PromptBundle {
    Strategy strategy = Strategy::BestAmongK;
    std::string system_message;
    std::string user_message;
    std::vector<UniqueOption> options;
    std::string window_id;
};

/// Whitespace-canonical form of an explanation: trimmed, internal whitespace
/// runs collapsed to single spaces, case preserved. Two explanations are
/// "the same" exactly when their canonical forms are equal.
std::string canonicalize(std::string_view text);

/// Collapses the case's candidates into unique options. Models are visited in
/// roster order; an option's label position follows the first occurrence of
/// its text. Contributor lists partition the roster ids.
std::vector<UniqueOption> deduplicate(const WindowCase& window_case, const ModelRoster& roster);

/// Prompt text with named `{placeholder}` slots, one section per part:
///
///   [criteria]       shared evaluation criteria, substituted into {criteria}
///   [best_among_k]   system message for the pick-the-best strategy
///   [likert]         system message for the 1-5 scoring strategy
///   [user]           user message; must use {activity} and {options}
///
/// System sections must use {duration_seconds}, {criteria} and
/// {format_instruction}. The format instruction (chain-of-thought request
/// plus the machine-readable final-line contract) is supplied by the engine
/// so that every rendered prompt carries a parseable answer format.
class PromptTemplate {
public:
    static PromptTemplate bundled_default();
    static PromptTemplate from_file(const std::string& path);
    static PromptTemplate from_string(std::string text);

    const std::string& criteria() const { return criteria_; }
    const std::string& system_section(Strategy s) const;
    const std::string& user_section() const { return user_; }

    /// FNV-1a hash of the raw template text, as 16 hex chars. Reports embed
    /// it so results can be traced back to the exact prompt wording.
    const std::string& hash() const { return hash_; }

private:
    std::string criteria_;
    std::string best_system_;
    std::string likert_system_;
    std::string user_;
    std::string hash_;
};

/// Renders the system and user messages for one window. Throws
/// TemplateMissingPlaceholder if a required slot is absent from the template
/// section in use.
PromptBundle build_prompt(Strategy strategy, const WindowCase& window_case,
                          const std::vector<UniqueOption>& options,
                          const PromptTemplate& tmpl);

/// The chain-of-thought plus final-line format instruction for a strategy,
/// exactly as substituted into {format_instruction}.
std::string format_instruction(Strategy strategy);

} // namespace xarjudge
