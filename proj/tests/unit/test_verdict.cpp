#include <doctest.h>

#include <random>
#include <string>
#include <vector>

#include "core/errors.hpp"
#include "core/verdict.hpp"
#include "support/checks.hpp"

using namespace xarjudge;

namespace {
const std::vector<std::string> kAB = {"A", "B"};
const std::vector<std::string> kABC = {"A", "B", "C"};
} // namespace

TEST_CASE("parse_verdict extracts the chosen label after reasoning") {
    JudgeVerdict v = parse_verdict(
        "Option A is vague. Option B cites the right events.\nFINAL: B\n",
        Strategy::BestAmongK, kAB);
    CHECK(v.kind == Strategy::BestAmongK);
    CHECK(v.chosen_label == "B");
    CHECK(v.reasoning.find("vague") != std::string::npos);
}

TEST_CASE("parse_verdict extracts a full likert score map") {
    JudgeVerdict v = parse_verdict("thinking...\nSCORES: A=4; B=2\n",
                                   Strategy::LikertScoring, kAB);
    CHECK(v.kind == Strategy::LikertScoring);
    CHECK(v.scores == std::map<std::string, int>{{"A", 4}, {"B", 2}});
}

TEST_CASE("parse_verdict uses the last marker occurrence") {
    JudgeVerdict v = parse_verdict(
        "First guess: FINAL: A\nOn reflection that was wrong.\nFINAL: B",
        Strategy::BestAmongK, kAB);
    CHECK(v.chosen_label == "B");

    JudgeVerdict w = parse_verdict("SCORES: A=1; B=1\ncorrected:\nSCORES: A=5; B=2",
                                   Strategy::LikertScoring, kAB);
    CHECK(w.scores.at("A") == 5);
}

TEST_CASE("parse_verdict tolerates real-world formatting noise") {
    CHECK(parse_verdict("FINAL:B", Strategy::BestAmongK, kAB).chosen_label == "B");
    CHECK(parse_verdict("FINAL:  B.", Strategy::BestAmongK, kAB).chosen_label == "B");
    CHECK(parse_verdict("FINAL: B)", Strategy::BestAmongK, kAB).chosen_label == "B");

    JudgeVerdict v = parse_verdict("SCORES: A = 4, B : 2", Strategy::LikertScoring, kAB);
    CHECK(v.scores == std::map<std::string, int>{{"A", 4}, {"B", 2}});
}

TEST_CASE("parse_verdict rejects out-of-range likert scores") {
    CHECK(error_code_of([] {
              parse_verdict("SCORES: A=6; B=2", Strategy::LikertScoring, kAB);
          }) == ErrorCode::OutOfRangeScore);
    CHECK(error_code_of([] {
              parse_verdict("SCORES: A=0; B=2", Strategy::LikertScoring, kAB);
          }) == ErrorCode::OutOfRangeScore);
}

TEST_CASE("parse_verdict error taxonomy") {
    // no marker at all
    CHECK(error_code_of([] { parse_verdict("no answer here", Strategy::BestAmongK, kAB); }) ==
          ErrorCode::MissingFinalLine);
    // the other strategy's marker
    CHECK(error_code_of([] { parse_verdict("SCORES: A=4; B=2", Strategy::BestAmongK, kAB); }) ==
          ErrorCode::StrategyMismatch);
    CHECK(error_code_of([] { parse_verdict("FINAL: A", Strategy::LikertScoring, kAB); }) ==
          ErrorCode::StrategyMismatch);
    // label outside the option set
    CHECK(error_code_of([] { parse_verdict("FINAL: C", Strategy::BestAmongK, kAB); }) ==
          ErrorCode::UnknownLabel);
    CHECK(error_code_of([] {
              parse_verdict("SCORES: A=4; C=2", Strategy::LikertScoring, kAB);
          }) == ErrorCode::UnknownLabel);
    // not a single letter
    CHECK(error_code_of([] { parse_verdict("FINAL: AB", Strategy::BestAmongK, kAB); }) ==
          ErrorCode::MissingFinalLine);
    CHECK(error_code_of([] { parse_verdict("FINAL: 1", Strategy::BestAmongK, kAB); }) ==
          ErrorCode::MissingFinalLine);
    // missing or repeated options
    CHECK(error_code_of([] { parse_verdict("SCORES: A=4", Strategy::LikertScoring, kAB); }) ==
          ErrorCode::IncompleteScores);
    CHECK(error_code_of([] {
              parse_verdict("SCORES: A=4; A=5; B=1", Strategy::LikertScoring, kAB);
          }) == ErrorCode::IncompleteScores);
    // nothing to parse against
    CHECK(error_code_of([] { parse_verdict("FINAL: A", Strategy::BestAmongK, {}); }) ==
          ErrorCode::InvalidArgument);
}

TEST_CASE("only the final line counts, not text after it on later lines") {
    JudgeVerdict v = parse_verdict("FINAL: A\nSo B was weaker overall.",
                                   Strategy::BestAmongK, kAB);
    CHECK(v.chosen_label == "A");
}

TEST_CASE("render_final_line emits the exact accepted shape") {
    JudgeVerdict best;
    best.kind = Strategy::BestAmongK;
    best.chosen_label = "C";
    CHECK(render_final_line(best) == "FINAL: C");

    JudgeVerdict likert;
    likert.kind = Strategy::LikertScoring;
    likert.scores = {{"A", 5}, {"B", 3}};
    CHECK(render_final_line(likert) == "SCORES: A=5; B=3");
}

TEST_CASE("parse-render round-trip over random verdicts") {
    std::mt19937_64 gen(1207);
    for (int iter = 0; iter < 500; ++iter) {
        INFO("iteration " << iter);
        const int n_labels = 1 + static_cast<int>(gen() % 6);
        std::vector<std::string> labels;
        for (int i = 0; i < n_labels; ++i) {
            labels.push_back(std::string(1, static_cast<char>('A' + i)));
        }

        JudgeVerdict v;
        if (gen() % 2 == 0) {
            v.kind = Strategy::BestAmongK;
            v.chosen_label = labels[gen() % labels.size()];
        } else {
            v.kind = Strategy::LikertScoring;
            for (const std::string& label : labels) {
                v.scores[label] = 1 + static_cast<int>(gen() % 5);
            }
        }

        std::string text = render_final_line(v);
        if (gen() % 2 == 0) text = "Reasoning about each option first.\n" + text;
        if (gen() % 3 == 0) text += "\n";

        JudgeVerdict parsed = parse_verdict(text, v.kind, labels);
        CHECK(parsed.same_decision(v));
    }
}

TEST_CASE("parse_verdict survives fuzzed input without crashing") {
    std::mt19937_64 gen(0xfeed);
    const std::vector<std::string> fragments = {
        "FINAL:", "SCORES:", "A", "B", "=", ";", ",", ":", "4", "9999999999",
        "\n", " ", "final:", "FINAL", "A=4", "\t", "\r\n", "=5", "Z=",
    };
    int parsed_ok = 0;
    for (int iter = 0; iter < 1200; ++iter) {
        std::string text;
        if (iter % 2 == 0) {
            const int len = static_cast<int>(gen() % 60);
            for (int i = 0; i < len; ++i) {
                text.push_back(static_cast<char>(gen() % 256));
            }
        } else {
            const int parts = static_cast<int>(gen() % 10);
            for (int i = 0; i < parts; ++i) text += fragments[gen() % fragments.size()];
        }
        Strategy strategy = gen() % 2 == 0 ? Strategy::BestAmongK : Strategy::LikertScoring;
        try {
            parse_verdict(text, strategy, kABC);
            ++parsed_ok;
        } catch (const Error&) {
            // typed rejection is the expected outcome for garbage
        }
    }
    // Sanity: the fuzzer is allowed to stumble into valid verdicts, but the
    // vast majority of inputs must be rejected.
    CHECK(parsed_ok < 600);
}
