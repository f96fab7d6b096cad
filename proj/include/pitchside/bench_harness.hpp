#pragma once

#include <array>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "pitchside/executor.hpp"
#include "pitchside/model_gateway.hpp"

namespace pitchside::harness {

enum class Category { Text, Image, Video };

std::string_view to_string(Category category) noexcept;
std::optional<Category> parse_category(std::string_view text);

// "Q7" -> 7 (case-insensitive); nullopt unless the label is Q1..Q13.
std::optional<int> task_number(std::string_view task);
std::string task_label(int number);
// Q1-Q2 Text, Q3-Q6 Image, Q7-Q13 Video. Throws SchemaError for a bad label.
Category category_of(std::string_view task);

// Benchmark sample counts per task, Q1..Q13.
const std::map<std::string, long>& benchmark_task_counts();

struct QAItem {
    std::string id;
    std::string task;
    std::string question;
    std::array<std::string, 4> options;
    int answer_index = 1;  // 1..4
    std::vector<std::string> materials;

    Category modality() const { return category_of(task); }
    friend bool operator==(const QAItem&, const QAItem&) = default;
};

// Throws SchemaError naming the item id and field.
void validate_item(const QAItem& item);
QAItem item_from_json(const nlohmann::json& doc);
nlohmann::json item_to_json(const QAItem& item);

// JSON Lines, one item per line; an optional "modality" field must agree with the task.
std::vector<QAItem> parse_dataset(std::string_view jsonl);
std::vector<QAItem> load_dataset(const std::string& path);
std::string render_dataset(const std::vector<QAItem>& items);
std::map<std::string, long> task_counts(const std::vector<QAItem>& items);

// First standalone O1..O4 token, case-insensitive.
std::optional<int> parse_option_label(std::string_view response);

std::string render_options(const std::array<std::string, 4>& options);

// Maps an open answer onto an option; one re-prompt, then Unmapped.
int choice_select(gateway::Gateway& gateway, std::string_view question, const std::array<std::string, 4>& options,
                  std::string_view open_answer, std::string_view agent_process);

struct TaskStats {
    long n = 0;
    long correct = 0;
    double accuracy = 0.0;  // percent, one decimal

    friend bool operator==(const TaskStats&, const TaskStats&) = default;
};

struct Failure {
    std::string id;
    std::string reason;

    friend bool operator==(const Failure&, const Failure&) = default;
};

struct EvalReport {
    std::map<int, TaskStats> per_task;  // keyed by task number
    std::map<Category, TaskStats> per_category;
    TaskStats overall;
    std::vector<Failure> failures;  // dataset order
};

double round_half_up(double value, int decimals = 1);
// 100 * correct / n rounded half-up to one decimal, computed exactly.
double percent(long correct, long n);

struct Aggregate {
    std::map<Category, double> per_category;
    double overall = 0.0;
};

// Sample-weighted means of per-task accuracies. Throws MissingTask when a task
// has an accuracy but no positive count.
Aggregate aggregate(const std::map<int, double>& per_task_accuracy, const std::map<int, long>& per_task_counts);

using AnswerFn = std::function<std::pair<std::string, executor::ExecutionTrace>(
    std::string_view question, const std::vector<std::string>& materials)>;

struct EvalOptions {
    std::size_t concurrency = 1;
    std::string trace_dir;  // one <id>.json per item when set
};

struct ItemOutcome {
    std::string id;
    int selected = 0;  // 0 when aborted or unmapped
    bool correct = false;
    std::string failure;
};

EvalReport evaluate(const std::vector<QAItem>& items, const AnswerFn& agent, gateway::Gateway& selector,
                    const EvalOptions& options = {});
EvalReport summarize(const std::vector<QAItem>& items, const std::vector<ItemOutcome>& outcomes);

enum class ReportFormat { Text, Json };
std::string render_report(const EvalReport& report, ReportFormat format);

}  // namespace pitchside::harness
