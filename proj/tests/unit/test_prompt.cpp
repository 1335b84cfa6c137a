#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "core/errors.hpp"
#include "core/prompt.hpp"
#include "support/checks.hpp"
#include "support/generators.hpp"
#include "support/tempfile.hpp"

using namespace xarjudge;

TEST_CASE("canonicalize trims and collapses whitespace, preserves case") {
    CHECK(canonicalize("  she is  in the kitchen ") == "she is in the kitchen");
    CHECK(canonicalize("abc") == "abc");
    CHECK(canonicalize("a\t b\n\nc") == "a b c");
    CHECK(canonicalize("   ") == "");
    CHECK(canonicalize("She is in the kitchen") != canonicalize("she is in the kitchen"));
}

namespace {

WindowCase case_with_texts(const std::vector<std::pair<std::string, std::string>>& texts) {
    WindowCase c;
    c.window.window_id = "w1";
    c.window.duration_seconds = 60.0;
    c.window.predicted_activity = "Cooking";
    for (const auto& [id, text] : texts) c.candidates.push_back({id, text});
    return c;
}

ModelRoster roster3() { return {{"m1", "m2", "m3"}, {"Cooking"}}; }

} // namespace

TEST_CASE("deduplicate merges equal texts and keeps contributor order") {
    WindowCase c = case_with_texts({{"m1", "A"}, {"m2", "A"}, {"m3", "B"}});
    std::vector<UniqueOption> options = deduplicate(c, roster3());
    REQUIRE(options.size() == 2);
    CHECK(options[0].label == "A");
    CHECK(options[0].text == "A");
    CHECK(options[0].contributors == std::vector<std::string>{"m1", "m2"});
    CHECK(options[1].label == "B");
    CHECK(options[1].contributors == std::vector<std::string>{"m3"});
}

TEST_CASE("deduplicate with all-distinct and all-identical texts") {
    {
        WindowCase c = case_with_texts({{"m1", "A"}, {"m2", "B"}, {"m3", "C"}});
        std::vector<UniqueOption> options = deduplicate(c, roster3());
        REQUIRE(options.size() == 3);
        for (const UniqueOption& opt : options) CHECK(opt.contributors.size() == 1);
    }
    {
        WindowCase c = case_with_texts({{"m1", "A"}, {"m2", " A"}, {"m3", "A "}});
        std::vector<UniqueOption> options = deduplicate(c, roster3());
        REQUIRE(options.size() == 1);
        CHECK(options[0].contributors == std::vector<std::string>{"m1", "m2", "m3"});
    }
}

TEST_CASE("deduplicate follows roster order, not candidate order") {
    WindowCase c = case_with_texts({{"m3", "zzz"}, {"m1", "aaa"}, {"m2", "bbb"}});
    std::vector<UniqueOption> options = deduplicate(c, roster3());
    REQUIRE(options.size() == 3);
    CHECK(options[0].text == "aaa"); // m1 first in roster
    CHECK(options[1].text == "bbb");
    CHECK(options[2].text == "zzz");
}

TEST_CASE("deduplicate fails cleanly past 26 options and on missing candidates") {
    {
        ModelRoster roster;
        roster.activity_set = {"Cooking"};
        WindowCase c;
        c.window.window_id = "w1";
        c.window.duration_seconds = 60.0;
        c.window.predicted_activity = "Cooking";
        for (int i = 0; i < 27; ++i) {
            std::string id = "m" + std::to_string(i);
            roster.model_ids.push_back(id);
            c.candidates.push_back({id, "text " + std::to_string(i)});
        }
        CHECK(error_code_of([&] { deduplicate(c, roster); }) == ErrorCode::InvalidArgument);
    }
    {
        WindowCase c = case_with_texts({{"m1", "A"}, {"m2", "B"}});
        CHECK(error_code_of([&] { deduplicate(c, roster3()); }) == ErrorCode::RosterMismatch);
    }
}

TEST_CASE("deduplicate property: contributors partition the roster, texts distinct") {
    std::mt19937_64 gen(509);
    for (int iter = 0; iter < 500; ++iter) {
        EvaluationPool pool = testgen::random_pool(gen);
        for (const WindowCase& c : pool.cases) {
            INFO("iteration " << iter << ", window " << c.window.window_id);
            std::vector<UniqueOption> options = deduplicate(c, pool.roster);

            std::vector<std::string> all_contributors;
            std::set<std::string> texts;
            for (std::size_t i = 0; i < options.size(); ++i) {
                CHECK(options[i].label == std::string(1, static_cast<char>('A' + i)));
                CHECK(texts.insert(options[i].text).second); // pairwise distinct
                CHECK(options[i].text == canonicalize(options[i].text));
                for (const std::string& id : options[i].contributors) {
                    all_contributors.push_back(id);
                }
            }
            std::sort(all_contributors.begin(), all_contributors.end());
            std::vector<std::string> roster_sorted = pool.roster.model_ids;
            std::sort(roster_sorted.begin(), roster_sorted.end());
            REQUIRE(all_contributors == roster_sorted);
        }
    }
}

TEST_CASE("build_prompt renders activity, options and the answer contract") {
    WindowCase c = case_with_texts({{"m1", "the fridge was opened"}, {"m2", "vague words"}});
    ModelRoster roster{{"m1", "m2"}, {"Cooking"}};
    std::vector<UniqueOption> options = deduplicate(c, roster);
    PromptTemplate tmpl = PromptTemplate::bundled_default();

    PromptBundle best = build_prompt(Strategy::BestAmongK, c, options, tmpl);
    CHECK(best.user_message.find("Cooking") != std::string::npos);
    CHECK(best.user_message.find("A) the fridge was opened") != std::string::npos);
    CHECK(best.user_message.find("B) vague words") != std::string::npos);
    CHECK(best.system_message.find("60") != std::string::npos);
    CHECK(best.system_message.find("step by step") != std::string::npos);
    CHECK(best.system_message.find("FINAL: <label>") != std::string::npos);
    CHECK(best.system_message.find("{") == std::string::npos); // all slots filled
    CHECK(best.window_id == "w1");

    PromptBundle likert = build_prompt(Strategy::LikertScoring, c, options, tmpl);
    CHECK(likert.system_message.find("from 1 to 5") != std::string::npos);
    CHECK(likert.system_message.find("SCORES:") != std::string::npos);
    CHECK(likert.system_message.find("step by step") != std::string::npos);
    CHECK(likert.user_message == best.user_message);
}

TEST_CASE("template without a required placeholder is rejected") {
    const char* text =
        "[criteria]\nbe fair\n"
        "[best_among_k]\nJudge a {duration_seconds}-second window.\n{criteria}\n"
        "[likert]\nJudge a window.\n{criteria}\n{format_instruction}\n" // no duration
        "[user]\n{activity}\n{options}\n";
    PromptTemplate tmpl = PromptTemplate::from_string(text);

    WindowCase c = case_with_texts({{"m1", "x"}, {"m2", "y"}});
    ModelRoster roster{{"m1", "m2"}, {"Cooking"}};
    std::vector<UniqueOption> options = deduplicate(c, roster);

    // best_among_k lacks {format_instruction}; likert lacks {duration_seconds}
    CHECK(error_code_of([&] { build_prompt(Strategy::BestAmongK, c, options, tmpl); }) ==
          ErrorCode::TemplateMissingPlaceholder);
    CHECK(error_code_of([&] { build_prompt(Strategy::LikertScoring, c, options, tmpl); }) ==
          ErrorCode::TemplateMissingPlaceholder);
}

TEST_CASE("template parsing rejects stray text and empty documents") {
    CHECK(error_code_of([] { PromptTemplate::from_string("hello\n[user]\nx\n"); }) ==
          ErrorCode::MalformedDocument);
    CHECK(error_code_of([] { PromptTemplate::from_string(""); }) ==
          ErrorCode::MalformedDocument);
    CHECK(error_code_of([] { PromptTemplate::from_file("/no/such/file.txt"); }) ==
          ErrorCode::FileNotFound);
}

TEST_CASE("template from_file matches from_string and hashes its text") {
    const std::string text =
        "[criteria]\nprefer grounded explanations\n"
        "[best_among_k]\n{duration_seconds} {criteria} {format_instruction}\n"
        "[likert]\n{duration_seconds} {criteria} {format_instruction}\n"
        "[user]\n{activity}: {options}\n";
    std::string path = testsupport::write_temp(text, ".txt");

    PromptTemplate from_file = PromptTemplate::from_file(path);
    PromptTemplate from_string = PromptTemplate::from_string(text);
    CHECK(from_file.hash() == from_string.hash());
    CHECK(from_file.hash().size() == 16);
    CHECK(from_file.hash() != PromptTemplate::bundled_default().hash());
    CHECK(from_file.criteria() == "prefer grounded explanations");

    WindowCase c = case_with_texts({{"m1", "x"}, {"m2", "x"}});
    ModelRoster roster{{"m1", "m2"}, {"Cooking"}};
    std::vector<UniqueOption> options = deduplicate(c, roster);
    PromptBundle a = build_prompt(Strategy::BestAmongK, c, options, from_file);
    PromptBundle b = build_prompt(Strategy::BestAmongK, c, options, from_string);
    CHECK(a.system_message == b.system_message);
    CHECK(a.user_message == b.user_message);
    CHECK(a.user_message.find("Cooking: A) x") != std::string::npos);
}

TEST_CASE("build_prompt refuses an empty option list") {
    WindowCase c = case_with_texts({});
    CHECK(error_code_of([&] {
              build_prompt(Strategy::BestAmongK, c, {}, PromptTemplate::bundled_default());
          }) == ErrorCode::InvalidArgument);
}
