#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>

#include "pitchside/bench_harness.hpp"
#include "pitchside/error.hpp"
#include "pitchside/text.hpp"
#include "support.hpp"

using namespace pitchside;
using namespace pitchside::harness;
using gateway::MatchKind;
using gateway::ScriptRecord;
using gateway::ScriptedGateway;

namespace {

ErrorKind kind_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    return ErrorKind::ConfigError;
}

QAItem item(std::string id, std::string task, int answer = 1) {
    return {std::move(id), std::move(task), "Who won?", {"A", "B", "C", "D"}, answer, {}};
}

// Weighted mean in plain long double with the half-up rule applied by hand.
double oracle_mean(const std::vector<std::pair<double, long>>& rows) {
    long double num = 0, den = 0;
    for (const auto& [acc, n] : rows) {
        num += static_cast<long double>(acc) * n;
        den += n;
    }
    const long double tenths = num * 10 / den;
    return static_cast<double>(std::floor(tenths + 0.5L + 1e-9L) / 10);
}

executor::ExecutionTrace completed_trace(const std::string& answer) {
    executor::ExecutionTrace t;
    t.status = executor::RunStatus::Completed;
    t.final_answer = answer;
    return t;
}

}  // namespace

TEST(Harness, TaskTable) {
    const auto& counts = benchmark_task_counts();
    ASSERT_EQ(counts.size(), 13u);
    long total = 0;
    for (const auto& [_, n] : counts) total += n;
    EXPECT_EQ(total, 9500);
    EXPECT_EQ(counts.at("Q1"), 1500);
    EXPECT_EQ(counts.at("Q13"), 300);
    EXPECT_EQ(category_of("Q2"), Category::Text);
    EXPECT_EQ(category_of("Q6"), Category::Image);
    EXPECT_EQ(category_of("Q7"), Category::Video);
    EXPECT_EQ(task_number("Q13"), 13);
    EXPECT_FALSE(task_number("Q14").has_value());
    EXPECT_EQ(task_number("q1"), 1);
    EXPECT_EQ(kind_of([] { category_of("Q0"); }), ErrorKind::SchemaError);
    EXPECT_EQ(parse_category("video"), Category::Video);
}

TEST(Harness, LoadsFixtureDataset) {
    const auto items = load_dataset("eval/items13.jsonl");
    ASSERT_EQ(items.size(), 13u);
    EXPECT_EQ(task_counts(items).size(), 13u);
    EXPECT_EQ(parse_dataset(render_dataset(items)), items);
}

TEST(Harness, SchemaErrors) {
    try {
        load_dataset("eval/bad_schema.jsonl");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::SchemaError);
        EXPECT_NE(std::string(e.what()).find("'s01'"), std::string::npos);
        EXPECT_NE(std::string(e.what()).find("options"), std::string::npos);
    }
    auto doc = item_to_json(item("x", "Q5"));
    doc["modality"] = "Video";
    EXPECT_EQ(kind_of([&] { item_from_json(doc); }), ErrorKind::SchemaError);
    doc["modality"] = "Image";
    EXPECT_EQ(item_from_json(doc).modality(), Category::Image);
    const auto line = item_to_json(item("x", "Q1")).dump() + "\n";
    EXPECT_EQ(kind_of([&] { parse_dataset(line + line); }), ErrorKind::SchemaError);
    EXPECT_EQ(kind_of([] { parse_dataset("{not json\n"); }), ErrorKind::SchemaError);
    auto dup = item("x", "Q1");
    dup.options[2] = "A";
    EXPECT_EQ(kind_of([&] { validate_item(dup); }), ErrorKind::SchemaError);
    EXPECT_EQ(kind_of([] { validate_item(item("x", "Q1", 5)); }), ErrorKind::SchemaError);
}

TEST(Harness, OptionLabels) {
    EXPECT_EQ(parse_option_label("O3"), 3);
    EXPECT_EQ(parse_option_label("The answer is O2."), 2);
    EXPECT_EQ(parse_option_label("o4"), 4);
    EXPECT_FALSE(parse_option_label("O5").has_value());
    EXPECT_FALSE(parse_option_label("O12").has_value());
    EXPECT_FALSE(parse_option_label("FOO1").has_value());
    EXPECT_EQ(parse_option_label("(O1) or O2"), 1);
    EXPECT_EQ(render_options({"a", "b", "c", "d"}), "O1: a\nO2: b\nO3: c\nO4: d");
}

TEST(Harness, ChoiceSelection) {
    auto rec = gateway::RecordingGateway(std::make_shared<ScriptedGateway>(std::vector<ScriptRecord>{
        {"2-1, Chelsea won", MatchKind::Substring, "O3", "choice_select"},
        {"Which half?", MatchKind::Substring, "The answer is O2.", "choice_select"},
        {"", MatchKind::Substring, "I am not sure.", "choice_select"}}));
    const std::array<std::string, 4> opts{"0 - 0", "1 - 1", "2 - 1", "3 - 0"};
    EXPECT_EQ(choice_select(rec, "What was the score?", opts, "2-1, Chelsea won", "Question: What was the score?"), 3);
    const auto prompt = rec.exchanges().back().prompt;
    EXPECT_NE(prompt.find("O3: 2 - 1"), std::string::npos);
    EXPECT_NE(prompt.find("Final answer: 2-1, Chelsea won"), std::string::npos);
    EXPECT_EQ(choice_select(rec, "Which half?", opts, "second", "process"), 2);
    EXPECT_EQ(kind_of([&] { choice_select(rec, "Who?", opts, "nobody", "process"); }), ErrorKind::Unmapped);
    EXPECT_EQ(rec.exchanges().size(), 4u);
}

TEST(Harness, PercentIsExact) {
    EXPECT_EQ(percent(9, 10), 90.0);
    EXPECT_EQ(percent(1, 3), 33.3);
    EXPECT_EQ(percent(2, 3), 66.7);
    EXPECT_EQ(percent(1, 8), 12.5);
    EXPECT_EQ(percent(1, 16), 6.3);
    EXPECT_EQ(percent(0, 0), 0.0);
    for (long n = 1; n <= 200; ++n)
        for (long c = 0; c <= n; ++c) ASSERT_EQ(percent(c, n), oracle_mean({{100.0 * c / n, 1}})) << c << "/" << n;
    EXPECT_EQ(round_half_up(61.05), 61.1);
    EXPECT_EQ(round_half_up(0.25, 1), 0.3);
}

TEST(Harness, AggregationExamples) {
    const std::map<int, long> counts{{1, 1500}, {2, 1200}, {3, 400}, {4, 1000}, {5, 200},  {6, 600}, {7, 400},
                                     {8, 400},  {9, 1000}, {10, 1000}, {11, 800}, {12, 700}, {13, 300}};
    const auto text = aggregate({{1, 95.9}, {2, 71.4}}, counts);
    EXPECT_EQ(text.per_category.at(Category::Text), 85.0);
    EXPECT_EQ(text.per_category.at(Category::Text), oracle_mean({{95.9, 1500}, {71.4, 1200}}));

    const auto image = aggregate({{3, 76.7}, {4, 46.0}, {5, 89.6}, {6, 70.6}}, counts);
    EXPECT_EQ(image.per_category.at(Category::Image), 62.3);

    const std::map<int, double> qwen_video{{7, 56.8}, {8, 31.6}, {9, 52.2}, {10, 51.6}, {11, 35.0}, {12, 46.9}, {13, 50.7}};
    const auto video = aggregate(qwen_video, counts);
    EXPECT_EQ(video.per_category.at(Category::Video), 46.8);
    std::vector<std::pair<double, long>> rows;
    for (const auto& [t, a] : qwen_video) rows.emplace_back(a, counts.at(t));
    EXPECT_EQ(video.per_category.at(Category::Video), oracle_mean(rows));

    EXPECT_EQ(kind_of([&] { aggregate({{1, 50.0}}, {{2, 10}}); }), ErrorKind::MissingTask);
    EXPECT_EQ(kind_of([&] { aggregate({{1, 50.0}}, {{1, 0}}); }), ErrorKind::MissingTask);
}

TEST(Harness, AllCorrectThirteenItemRun) {
    auto gw = ScriptedGateway::load("eval/script.json");
    auto stack = support::make_stack(gw);
    const auto items = load_dataset("eval/items13.jsonl");
    const AnswerFn agent = [&](std::string_view q, const std::vector<std::string>& m) { return stack.agent->answer(q, m); };
    const auto report = evaluate(items, agent, *gw);
    ASSERT_EQ(report.per_task.size(), 13u);
    for (const auto& [task, s] : report.per_task) {
        EXPECT_EQ(s.n, 1) << task;
        EXPECT_EQ(s.accuracy, 100.0) << task;
    }
    EXPECT_TRUE(report.failures.empty());
    EXPECT_EQ(report.overall.accuracy, 100.0);
    EXPECT_EQ(render_report(report, ReportFormat::Text), text::read_file("eval/report13.txt"));
}

TEST(Harness, OneAbortedItemInTen) {
    std::vector<QAItem> items;
    for (int i = 0; i < 10; ++i) items.push_back(item("t" + std::to_string(i), "Q1", 2));
    items[6].question = "Who lost?";
    ScriptedGateway selector({{"", MatchKind::Substring, "O2", "choice_select"}});
    const AnswerFn agent = [](std::string_view q, const std::vector<std::string>&) {
        if (q == "Who lost?") {
            executor::ExecutionTrace t;
            t.abort_reason = "MaxStepsExceeded: no EndCall within 6 steps";
            return std::make_pair(std::string(), t);
        }
        return std::make_pair(std::string("B"), completed_trace("B"));
    };
    const auto dir = support::scratch_dir("ninety");
    const auto report = evaluate(items, agent, selector, {3, dir});
    EXPECT_EQ(report.per_task.at(1).accuracy, 90.0);
    EXPECT_EQ(report.per_category.at(Category::Text).accuracy, 90.0);
    ASSERT_EQ(report.failures.size(), 1u);
    EXPECT_EQ(report.failures[0].id, "t6");
    EXPECT_EQ(report.failures[0].reason.rfind("aborted: MaxStepsExceeded", 0), 0u);
    std::size_t traces = 0;
    for (const auto& e : std::filesystem::directory_iterator(dir)) traces += e.path().extension() == ".json";
    EXPECT_EQ(traces, 10u);
}

TEST(Harness, AgentExceptionIsAFailure) {
    ScriptedGateway selector({{"", MatchKind::Substring, "O1", "choice_select"}});
    const AnswerFn agent = [](std::string_view, const std::vector<std::string>&)
        -> std::pair<std::string, executor::ExecutionTrace> { throw Error(ErrorKind::Timeout, "slow"); };
    const auto report = evaluate({item("a", "Q3")}, agent, selector);
    EXPECT_EQ(report.overall.correct, 0);
    ASSERT_EQ(report.failures.size(), 1u);
    EXPECT_NE(report.failures[0].reason.find("Timeout"), std::string::npos);
}

TEST(Harness, EmptyDatasetRejected) {
    ScriptedGateway selector({});
    const AnswerFn agent = [](std::string_view, const std::vector<std::string>&) {
        return std::make_pair(std::string(), executor::ExecutionTrace{});
    };
    EXPECT_EQ(kind_of([&] { evaluate({}, agent, selector); }), ErrorKind::SchemaError);
}

TEST(Harness, ReportRendering) {
    std::vector<QAItem> items{item("a", "Q1"), item("b", "Q5"), item("c", "Q9")};
    const auto report = summarize(items, {{"a", 1, true, ""}, {"b", 2, false, ""}, {"c", 0, false, "Unmapped: x"}});
    const auto text = render_report(report, ReportFormat::Text);
    EXPECT_EQ(text, render_report(report, ReportFormat::Text));
    EXPECT_EQ(text.rfind("Task  Category  N       Correct  Accuracy\n", 0), 0u);
    EXPECT_NE(text.find("Q1    Text      1       1        100.0"), std::string::npos);
    EXPECT_NE(text.find("Failures: 1"), std::string::npos);
    const auto json = nlohmann::json::parse(render_report(report, ReportFormat::Json));
    EXPECT_EQ(json["overall"]["correct"], 1);
    EXPECT_EQ(json["overall"]["accuracy"], 33.3);
    EXPECT_EQ(json["per_task"]["Q9"]["n"], 1);
    EXPECT_EQ(json["failures"][0]["id"], "c");
}
