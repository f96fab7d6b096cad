#include <gtest/gtest.h>

#include "pitchside/builtin_data.hpp"
#include "pitchside/builtin_tools.hpp"
#include "pitchside/error.hpp"
#include "pitchside/planner.hpp"
#include "pitchside/text.hpp"

using namespace pitchside;
using namespace pitchside::planner;
using gateway::MatchKind;
using gateway::ScriptedGateway;

namespace {

const std::string kQ2 = "What was the final score of the game 2015-02-21 - 18-00 Chelsea vs Burnley?";
const std::string kQ2Plan =
    "Known Info: {$GameContext$}\nTool Chain: [*Game Search* -> *Game info Retrieval* -> *Match History Retrieval* -> *LLM*]";

std::shared_ptr<toolbox::Registry> registry() {
    builtin::BuiltinDeps deps;
    deps.fixtures = toolbox::FixtureTable::load("tool_fixtures.json");
    return builtin::make_registry(deps);
}

Planner make_planner(std::vector<gateway::ScriptRecord> records) {
    return Planner(std::make_shared<ScriptedGateway>(std::move(records)), registry(), builtin::task_catalog());
}

}  // namespace

TEST(Planner, CatalogRoundTrips) {
    const auto& catalog = builtin::task_catalog();
    ASSERT_EQ(catalog.size(), 14u);
    const auto text = render_catalog(catalog);
    EXPECT_EQ(parse_catalog(text), catalog);
    EXPECT_EQ(render_catalog(parse_catalog(text)), text);
    EXPECT_NE(text.find("Task2: ****Match Situation QA****"), std::string::npos);
}

TEST(Planner, CatalogChainsValidate) {
    const auto reg = registry();
    for (const auto& task : builtin::task_catalog()) {
        const auto v = validate_chain(task.recommended_chain, *reg);
        EXPECT_EQ(v.chain.back(), "LLM") << task.title;
    }
}

TEST(Planner, RepetitionAnnotations) {
    EXPECT_EQ(split_repetition("Camera Detection (twice)"), std::make_pair(std::string("Camera Detection"), 2));
    EXPECT_EQ(split_repetition("Commentary Generation (five times)"),
              std::make_pair(std::string("Commentary Generation"), 5));
    EXPECT_EQ(split_repetition("LLM"), std::make_pair(std::string("LLM"), 1));
}

TEST(Planner, CameraSwitchingChainKeepsDuplicates) {
    const auto reg = registry();
    const auto v = validate_chain(builtin::task_catalog()[7].recommended_chain, *reg, {"clip.mp4"});
    EXPECT_EQ(v.chain, (std::vector<std::string>{"Camera Detection", "Camera Detection", "Camera Detection", "LLM"}));
    EXPECT_TRUE(v.warnings.empty());
}

TEST(Planner, MaterialWarnings) {
    const auto reg = registry();
    EXPECT_TRUE(validate_chain({"Frame Selection", "Number Recognition", "LLM"}, *reg, {"clip.mp4"}).warnings.empty());
    const auto v = validate_chain({"Number Recognition", "LLM"}, *reg, {"clip.mp4"});
    ASSERT_EQ(v.warnings.size(), 1u);
    EXPECT_NE(v.warnings[0].find("Number Recognition"), std::string::npos);
    EXPECT_TRUE(validate_chain({"Game Search", "Game Info Retrieval", "LLM"}, *reg).warnings.empty());
}

TEST(Planner, ValidationErrors) {
    const auto reg = registry();
    try {
        validate_chain({"Gane Search", "LLM"}, *reg);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::UnknownTool);
        ASSERT_FALSE(e.suggestions().empty());
        EXPECT_EQ(e.suggestions().front(), "Game Search");
    }
    EXPECT_THROW(validate_chain({}, *reg), Error);
}

TEST(Planner, MaterialManifest) {
    EXPECT_EQ(material_manifest({}), "None");
    EXPECT_EQ(material_manifest({"clip.mp4"}), "\"video\": {\"clip.mp4\"}");
    EXPECT_EQ(material_manifest({"a.png", "clip.mp4", "b.jpg"}), "\"image\": {\"a.png\", \"b.jpg\"}, \"video\": {\"clip.mp4\"}");
}

TEST(Planner, PromptEndsWithQueryBlock) {
    const auto reg = registry();
    const auto prompt = build_planning_prompt(kQ2, {}, *reg, builtin::task_catalog());
    EXPECT_NE(prompt.find("Additional Material: None\n\nYour response:"), std::string::npos);
    EXPECT_NE(prompt.find(kQ2), std::string::npos);
    EXPECT_NE(prompt.find("=== Tool Description for TOOL18 ==="), std::string::npos);
    EXPECT_NE(prompt.find("Task14:"), std::string::npos);
    const auto tail = prompt.substr(prompt.rfind(kQ2));
    EXPECT_NE(tail.find("Additional Material: None"), std::string::npos);
}

TEST(Planner, PlansMatchSituationQuestion) {
    const auto planner = make_planner({{"Chelsea vs Burnley", MatchKind::Substring, kQ2Plan, "planner"}});
    const auto plan = planner.plan(kQ2, {});
    EXPECT_EQ(plan.known_info, std::vector<std::string>{"GameContext"});
    EXPECT_EQ(plan.chain,
              (std::vector<std::string>{"Game Search", "Game Info Retrieval", "Match History Retrieval", "LLM"}));
    EXPECT_EQ(plan.attempts, 1);
    EXPECT_EQ(plan.raw_response, kQ2Plan);
    EXPECT_TRUE(plan.warnings.empty());
}

TEST(Planner, PlanningIsIdempotent) {
    const auto planner = make_planner({{"Chelsea vs Burnley", MatchKind::Substring, kQ2Plan, "planner"}});
    const auto a = planner.plan(kQ2, {});
    const auto b = planner.plan(kQ2, {});
    EXPECT_EQ(a.chain, b.chain);
    EXPECT_EQ(a.known_info, b.known_info);
    EXPECT_EQ(a.raw_responses, b.raw_responses);
}

TEST(Planner, RepairsUnknownToolName) {
    const std::string bad = text::replace_all(kQ2Plan, "Game Search", "Gane Search");
    const auto planner = make_planner({{"Your previous response could not be used", MatchKind::Substring, kQ2Plan, "planner"},
                                       {"Chelsea vs Burnley", MatchKind::Substring, bad, "planner"}});
    const auto plan = planner.plan(kQ2, {});
    EXPECT_EQ(plan.attempts, 2);
    EXPECT_EQ(plan.raw_responses, (std::vector<std::string>{bad, kQ2Plan}));
    EXPECT_EQ(plan.chain.front(), "Game Search");
}

TEST(Planner, FailsAfterRetries) {
    const auto planner = make_planner({{"Chelsea", MatchKind::Substring, "I would search the database first.", "planner"}});
    try {
        planner.plan(kQ2, {});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::PlanFailed);
        EXPECT_EQ(text::split(e.detail(), "\n---\n").size(), 3u);
    }
}
