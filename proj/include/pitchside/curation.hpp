#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "pitchside/bench_harness.hpp"
#include "pitchside/model_gateway.hpp"

namespace pitchside::curation {

struct AnnotationRecord {
    std::string id;
    std::string source;
    std::string task;  // Q1..Q13
    nlohmann::json payload = nlohmann::json::object();
    std::vector<std::string> materials;
};

// JSON Lines of {id, source, task, payload, materials}.
std::vector<AnnotationRecord> parse_annotations(std::string_view jsonl);
std::vector<AnnotationRecord> load_annotations(const std::string& path);

// Label pools keyed by task, e.g. {"Q3": [13 camera classes], "Q9": [24 action classes]}.
using LabelPools = std::map<std::string, std::vector<std::string>>;
LabelPools load_label_pools(const std::string& path);

// Payload "label" must be a member of the task's pool when the task has one.
// Throws SchemaError.
void validate_record(const AnnotationRecord& record, const LabelPools& pools);

struct OpenQA {
    std::string question;
    std::string answer;
    std::string task;
    std::string source_id;
    std::string mode;       // "template" | "model"
    std::string reference;  // model mode only
    std::vector<std::string> materials;

    friend bool operator==(const OpenQA&, const OpenQA&) = default;
};

struct QuestionTemplate {
    std::string question;  // may reference payload fields as {field}
    std::string answer;    // usually "{label}"
};

using TemplateBank = std::map<std::string, std::vector<QuestionTemplate>>;
// JSON {"Q9": [{"question": "...", "answer": "{label}"}, ...], ...}.
TemplateBank parse_templates(const nlohmann::json& doc);
TemplateBank load_templates(const std::string& path);

// Per-record stream seed; independent of processing order.
std::uint64_t derive_seed(std::uint64_t global_seed, std::string_view record_id);
// Uniform in [0, n) by rejection sampling, identical on every standard library.
std::size_t uniform_index(std::mt19937_64& rng, std::size_t n);

// Throws NoTemplate, or GenerationRejected when the payload lacks a referenced field.
OpenQA template_generate(const TemplateBank& bank, const AnnotationRecord& record, std::uint64_t seed);

// Throws GenerationRejected when a line is missing or the reference is not in the context.
OpenQA model_generate(gateway::Gateway& gateway, const AnnotationRecord& record, std::string_view context);

enum class Strategy { Category, Confuser };

// Distinct lines of a confuser response with list markers stripped.
std::vector<std::string> parse_distractors(std::string_view response);

// Throws PoolTooSmall or ConfuserRejected. `gateway` is only used by the confuser strategy.
harness::QAItem to_multichoice(const OpenQA& qa, const std::vector<std::string>& pool, Strategy strategy,
                               std::uint64_t seed, gateway::Gateway* gateway = nullptr);

struct Finding {
    std::string id;
    std::string kind;  // "invalid" | "duplicate"
    std::string detail;

    friend bool operator==(const Finding&, const Finding&) = default;
};

struct BalanceRow {
    std::string task;
    long count = 0;
    long target = 0;
};

struct ValidationReport {
    std::vector<Finding> findings;
    std::vector<BalanceRow> balance;  // Q1..Q13
    std::map<std::string, std::string> duplicate_of;  // id -> earlier id
};

ValidationReport validate_dataset(const std::vector<harness::QAItem>& items,
                                  const std::map<std::string, long>& targets = harness::benchmark_task_counts());

std::string render_findings(const ValidationReport& report);
// Tab-separated review sheet, one row per item: id task question answer duplicate_of issues keep.
std::string render_worksheet(const std::vector<harness::QAItem>& items, const ValidationReport& report);

}  // namespace pitchside::curation
