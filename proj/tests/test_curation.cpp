#include <gtest/gtest.h>

#include <functional>
#include <set>

#include "pitchside/curation.hpp"
#include "pitchside/error.hpp"
#include "pitchside/text.hpp"

using namespace pitchside;
using namespace pitchside::curation;
using gateway::MatchKind;
using gateway::ScriptedGateway;

namespace {

const std::string kData = PITCHSIDE_DATA_DIR;

ErrorKind kind_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    return ErrorKind::ConfigError;
}

AnnotationRecord record(std::string id, std::string task, nlohmann::json payload) {
    return {std::move(id), "fixture", std::move(task), std::move(payload), {"media/clip.mp4"}};
}

OpenQA open_qa(std::string answer, std::string id = "r1") {
    return {"What type of event is happening in this video?", std::move(answer), "Q9", std::move(id), "template", "", {}};
}

}  // namespace

TEST(Curation, LoadsAnnotations) {
    const auto recs = load_annotations("curation/annotations.jsonl");
    ASSERT_EQ(recs.size(), 3u);
    EXPECT_EQ(recs[0].payload["label"], "corner");
    EXPECT_EQ(kind_of([] { parse_annotations("{\"id\": \"x\", \"task\": \"Q9\", \"payload\": 3}\n"); }),
              ErrorKind::SchemaError);
    EXPECT_EQ(kind_of([] { parse_annotations("{\"id\": \"x\", \"task\": \"Q99\"}\n"); }), ErrorKind::SchemaError);
}

TEST(Curation, LabelPoolMembership) {
    const auto pools = load_label_pools(kData + "/label_pools.json");
    EXPECT_EQ(pools.at("Q3").size(), 13u);
    EXPECT_EQ(pools.at("Q9").size(), 24u);
    validate_record(record("a", "Q9", {{"label", "corner"}}), pools);
    EXPECT_EQ(kind_of([&] { validate_record(record("a", "Q9", {{"label", "moonwalk"}}), pools); }),
              ErrorKind::SchemaError);
    validate_record(record("a", "Q5", {{"number", "10"}}), pools);
}

TEST(Curation, TemplateGeneration) {
    const auto bank = load_templates(kData + "/templates.json");
    const auto q9 = template_generate(bank, record("ev-1", "Q9", {{"label", "corner"}}), 7);
    EXPECT_EQ(q9.answer, "corner");
    EXPECT_EQ(q9.mode, "template");
    EXPECT_EQ(q9.materials, std::vector<std::string>{"media/clip.mp4"});
    EXPECT_NE(q9.question.find("video"), std::string::npos);

    bool saw_event_question = false;
    for (int s = 0; s < 32; ++s) {
        const auto qa = template_generate(bank, record("ev-" + std::to_string(s), "Q9", {{"label", "corner"}}), 7);
        saw_event_question |= qa.question == "What type of event is happening in this video?";
    }
    EXPECT_TRUE(saw_event_question);

    auto jn = record("jn", "Q5", {{"number", 10}});
    jn.materials = {"media/player.png"};
    const auto q5 = template_generate(bank, jn, 1);
    EXPECT_EQ(q5.answer, "10");

    const auto q8 = template_generate(bank, record("rp", "Q8", {{"label", "clip 3"}}), 1);
    EXPECT_EQ(q8.question.rfind("The first video clip is a replay", 0), 0u);

    EXPECT_EQ(template_generate(bank, record("x", "Q9", {{"label", "goal"}}), 99),
              template_generate(bank, record("x", "Q9", {{"label", "goal"}}), 99));
    EXPECT_EQ(kind_of([&] { template_generate(bank, record("x", "Q1", {{"label", "a"}}), 1); }), ErrorKind::NoTemplate);
    EXPECT_EQ(kind_of([&] { template_generate(bank, record("x", "Q9", {{"other", "a"}}), 1); }),
              ErrorKind::GenerationRejected);
}

TEST(Curation, ModelGeneration) {
    const auto page = text::read_file("corpus/entities/lionel_messi.txt");
    ScriptedGateway gw({{"", MatchKind::Substring,
                         "Question: Which youth academy did Lionel Messi join?\nAnswer: La Masia\n"
                         "Reference: \"He joined Barcelona's youth academy La Masia in 2000\"",
                         "curation:Q1"},
                        {"", MatchKind::Substring, "Question: Who?\nAnswer: Pele\nReference: Pele scored 1000 goals",
                         "curation:Q2"}});
    const auto rec = record("wiki-1", "Q1", nlohmann::json::object());
    const auto qa = model_generate(gw, rec, page);
    EXPECT_EQ(qa.answer, "La Masia");
    EXPECT_EQ(qa.mode, "model");
    EXPECT_NE(page.find(qa.reference), std::string::npos);
    EXPECT_EQ(kind_of([&] { model_generate(gw, record("wiki-2", "Q2", nlohmann::json::object()), page); }),
              ErrorKind::GenerationRejected);
    ScriptedGateway terse({{"", MatchKind::Substring, "Question: Who?\nAnswer: Messi", ""}});
    EXPECT_EQ(kind_of([&] { model_generate(terse, rec, page); }), ErrorKind::GenerationRejected);
}

TEST(Curation, SeedDerivation) {
    EXPECT_EQ(derive_seed(1, "a"), derive_seed(1, "a"));
    EXPECT_NE(derive_seed(1, "a"), derive_seed(2, "a"));
    EXPECT_NE(derive_seed(1, "a"), derive_seed(1, "b"));
    std::mt19937_64 rng(5);
    for (int i = 0; i < 1000; ++i) ASSERT_LT(uniform_index(rng, 7), 7u);
}

TEST(Curation, CategoryStrategy) {
    const auto pool = load_label_pools(kData + "/label_pools.json").at("Q9");
    const auto item = to_multichoice(open_qa("corner"), pool, Strategy::Category, 42);
    const std::set<std::string> distinct(item.options.begin(), item.options.end());
    EXPECT_EQ(distinct.size(), 4u);
    EXPECT_EQ(item.options[item.answer_index - 1], "corner");
    for (const auto& o : item.options) EXPECT_NE(std::find(pool.begin(), pool.end(), o), pool.end());
    EXPECT_EQ(to_multichoice(open_qa("corner"), pool, Strategy::Category, 42), item);
    EXPECT_EQ(item.task, "Q9");
}

TEST(Curation, CategoryPoolTooSmall) {
    EXPECT_EQ(kind_of([] { to_multichoice(open_qa("corner"), {"goal", "save"}, Strategy::Category, 1); }),
              ErrorKind::PoolTooSmall);
    EXPECT_EQ(kind_of([] { to_multichoice(open_qa("corner"), {"goal", "Corner", "save", "GOAL"}, Strategy::Category, 1); }),
              ErrorKind::PoolTooSmall);
}

TEST(Curation, ConfuserStrategy) {
    OpenQA qa{"What was the final score?", "2 - 1", "Q2", "m1", "model", "", {}};
    ScriptedGateway good({{"", MatchKind::Substring, "1. 1 - 1\n2. 2 - 2\n3. 3 - 1", "curation:confuser"}});
    const auto item = to_multichoice(qa, {}, Strategy::Confuser, 3, &good);
    const std::set<std::string> distinct(item.options.begin(), item.options.end());
    EXPECT_EQ(distinct, (std::set<std::string>{"2 - 1", "1 - 1", "2 - 2", "3 - 1"}));
    EXPECT_EQ(item.options[item.answer_index - 1], "2 - 1");

    ScriptedGateway dup({{"", MatchKind::Substring, "- 1 - 1\n- 1 - 1\n- 3 - 1", ""}});
    EXPECT_EQ(kind_of([&] { to_multichoice(qa, {}, Strategy::Confuser, 3, &dup); }), ErrorKind::ConfuserRejected);
    ScriptedGateway echo({{"", MatchKind::Substring, "2 - 1\n1 - 1\n0 - 0", ""}});
    EXPECT_EQ(kind_of([&] { to_multichoice(qa, {}, Strategy::Confuser, 3, &echo); }), ErrorKind::ConfuserRejected);
    ScriptedGateway short_list({{"", MatchKind::Substring, "1 - 1\n0 - 0", ""}});
    EXPECT_EQ(kind_of([&] { to_multichoice(qa, {}, Strategy::Confuser, 3, &short_list); }), ErrorKind::ConfuserRejected);
    EXPECT_EQ(kind_of([&] { to_multichoice(qa, {}, Strategy::Confuser, 3, nullptr); }), ErrorKind::ConfuserRejected);
}

TEST(Curation, DistractorParsing) {
    EXPECT_EQ(parse_distractors("1. Chelsea\n2) Arsenal\n- \"Spurs\"\n\n* Fulham"),
              (std::vector<std::string>{"Chelsea", "Arsenal", "Spurs", "Fulham"}));
}

TEST(Curation, DatasetValidation) {
    std::vector<harness::QAItem> items;
    for (int t = 1; t <= 13; ++t) {
        items.push_back({"i" + std::to_string(t), harness::task_label(t), "Question number " + std::to_string(t) + "?",
                         {"a", "b", "c", "d"}, 1, {}});
    }
    const auto clean = validate_dataset(items);
    EXPECT_TRUE(clean.findings.empty());
    ASSERT_EQ(clean.balance.size(), 13u);
    EXPECT_EQ(clean.balance[0].count, 1);
    EXPECT_EQ(clean.balance[0].target, 1500);

    auto copy = items[4];
    copy.id = "copy";
    copy.question = "question NUMBER 5";
    items.push_back(copy);
    const auto dup = validate_dataset(items);
    ASSERT_EQ(dup.findings.size(), 1u);
    EXPECT_EQ(dup.findings[0], (Finding{"copy", "duplicate", "same question as 'i5'"}));
    EXPECT_EQ(dup.duplicate_of.at("copy"), "i5");

    const auto text = render_findings(dup);
    EXPECT_NE(text.find("Findings: 1"), std::string::npos);
    EXPECT_NE(text.find("Task\tCount\tTarget\tDelta\nQ1\t1\t1500\t-1499\n"), std::string::npos);
    EXPECT_NE(text.find("Q5\t2\t200\t-198\n"), std::string::npos);

    const auto sheet = render_worksheet(items, dup);
    const auto lines = text::split_lines(sheet);
    EXPECT_EQ(lines.front(), "id\ttask\tquestion\tanswer\tduplicate_of\tissues\tkeep");
    EXPECT_NE(sheet.find("copy\tQ5\tquestion NUMBER 5\ta\ti5\t"), std::string::npos);
    EXPECT_NE(sheet.find("\treview"), std::string::npos);

    auto broken = items;
    broken[0].options[1] = "a";
    EXPECT_EQ(validate_dataset(broken).findings.front().kind, "invalid");
}
