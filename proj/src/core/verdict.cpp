#include "core/verdict.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "core/errors.hpp"

namespace xarjudge {

namespace {

constexpr std::string_view kBestMarker = "FINAL:";
constexpr std::string_view kScoresMarker = "SCORES:";

bool is_label_char(char c) { return c >= 'A' && c <= 'Z'; }

void skip_spaces(std::string_view text, std::size_t& pos) {
    while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t')) ++pos;
}

void require_known_label(const std::string& label, const std::vector<std::string>& expected) {
    if (std::find(expected.begin(), expected.end(), label) == expected.end()) {
        throw Error(ErrorCode::UnknownLabel, "label '" + label + "' is not one of the options");
    }
}

JudgeVerdict parse_best(std::string_view raw_text, std::string_view tail,
                        const std::vector<std::string>& expected_labels) {
    std::size_t pos = 0;
    skip_spaces(tail, pos);
    if (pos >= tail.size() || !is_label_char(tail[pos])) {
        throw Error(ErrorCode::MissingFinalLine, "no option label after the FINAL: marker");
    }
    std::string label(1, tail[pos]);
    ++pos;
    // Tolerate trailing punctuation ("FINAL: B." / "FINAL: B)") but not a
    // longer word starting with a capital letter.
    if (pos < tail.size() && (std::isalnum(static_cast<unsigned char>(tail[pos])))) {
        throw Error(ErrorCode::MissingFinalLine,
                    "the FINAL: marker is not followed by a single option letter");
    }
    require_known_label(label, expected_labels);

    JudgeVerdict v;
    v.kind = Strategy::BestAmongK;
    v.chosen_label = std::move(label);
    v.reasoning = std::string(raw_text);
    return v;
}

JudgeVerdict parse_likert(std::string_view raw_text, std::string_view tail,
                          const std::vector<std::string>& expected_labels) {
    std::map<std::string, int> scores;
    std::size_t pos = 0;
    while (true) {
        skip_spaces(tail, pos);
        if (pos >= tail.size() || !is_label_char(tail[pos])) break;
        std::string label(1, tail[pos]);
        ++pos;
        skip_spaces(tail, pos);
        if (pos >= tail.size() || (tail[pos] != '=' && tail[pos] != ':')) break;
        ++pos;
        skip_spaces(tail, pos);
        std::size_t digits_start = pos;
        while (pos < tail.size() && std::isdigit(static_cast<unsigned char>(tail[pos]))) ++pos;
        if (pos == digits_start || pos - digits_start > 9) break;
        int value = std::stoi(std::string(tail.substr(digits_start, pos - digits_start)));

        require_known_label(label, expected_labels);
        if (value < 1 || value > 5) {
            throw Error(ErrorCode::OutOfRangeScore,
                        "score " + std::to_string(value) + " for label '" + label +
                            "' is outside the 1..5 range");
        }
        if (!scores.emplace(label, value).second) {
            throw Error(ErrorCode::IncompleteScores,
                        "label '" + label + "' is scored more than once");
        }

        skip_spaces(tail, pos);
        if (pos < tail.size() && (tail[pos] == ';' || tail[pos] == ',')) {
            ++pos;
            continue;
        }
        break;
    }

    for (const std::string& label : expected_labels) {
        if (scores.find(label) == scores.end()) {
            throw Error(ErrorCode::IncompleteScores, "option '" + label + "' was not scored");
        }
    }

    JudgeVerdict v;
    v.kind = Strategy::LikertScoring;
    v.scores = std::move(scores);
    v.reasoning = std::string(raw_text);
    return v;
}

} // namespace

JudgeVerdict parse_verdict(std::string_view raw_text, Strategy strategy,
                           const std::vector<std::string>& expected_labels) {
    if (expected_labels.empty()) {
        throw Error(ErrorCode::InvalidArgument, "expected_labels must not be empty");
    }

    const std::string_view marker =
        strategy == Strategy::BestAmongK ? kBestMarker : kScoresMarker;
    const std::string_view other =
        strategy == Strategy::BestAmongK ? kScoresMarker : kBestMarker;

    const std::size_t marker_pos = raw_text.rfind(marker);
    if (marker_pos == std::string_view::npos) {
        if (raw_text.rfind(other) != std::string_view::npos) {
            throw Error(ErrorCode::StrategyMismatch,
                        std::string("found ") + std::string(other) + " marker but the strategy expects " +
                            std::string(marker));
        }
        throw Error(ErrorCode::MissingFinalLine,
                    std::string("completion has no ") + std::string(marker) + " line");
    }

    // Everything after the last marker, cut at end of line.
    std::string_view tail = raw_text.substr(marker_pos + marker.size());
    if (std::size_t eol = tail.find('\n'); eol != std::string_view::npos) {
        tail = tail.substr(0, eol);
    }

    return strategy == Strategy::BestAmongK ? parse_best(raw_text, tail, expected_labels)
                                            : parse_likert(raw_text, tail, expected_labels);
}

std::string render_final_line(const JudgeVerdict& verdict) {
    if (verdict.kind == Strategy::BestAmongK) {
        return std::string(kBestMarker) + " " + verdict.chosen_label;
    }
    std::ostringstream out;
    out << kScoresMarker;
    bool first = true;
    for (const auto& [label, value] : verdict.scores) {
        out << (first ? " " : "; ") << label << "=" << value;
        first = false;
    }
    return out.str();
}

} // namespace xarjudge
