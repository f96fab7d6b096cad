#include "pitchside/bench_harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <regex>
#include <set>
#include <thread>

#include "pitchside/error.hpp"
#include "pitchside/prompts.hpp"
#include "pitchside/text.hpp"

namespace pitchside::harness {

using nlohmann::json;

std::string_view to_string(Category category) noexcept {
    switch (category) {
        case Category::Text: return "Text";
        case Category::Image: return "Image";
        case Category::Video: return "Video";
    }
    return "Text";
}

std::optional<Category> parse_category(std::string_view text) {
    const auto t = text::to_lower(text::trim(text));
    if (t == "text") return Category::Text;
    if (t == "image") return Category::Image;
    if (t == "video") return Category::Video;
    return std::nullopt;
}

std::optional<int> task_number(std::string_view task) {
    static const std::regex kTask(R"(^[Qq](\d{1,2})$)");
    const std::string s = text::trim(task);
    std::smatch m;
    if (!std::regex_match(s, m, kTask)) return std::nullopt;
    const int n = std::stoi(m[1].str());
    if (n < 1 || n > 13) return std::nullopt;
    return n;
}

std::string task_label(int number) { return "Q" + std::to_string(number); }

Category category_of(std::string_view task) {
    const auto n = task_number(task);
    if (!n) throw Error(ErrorKind::SchemaError, "unknown task '" + std::string(task) + "'", std::string(task));
    if (*n <= 2) return Category::Text;
    if (*n <= 6) return Category::Image;
    return Category::Video;
}

const std::map<std::string, long>& benchmark_task_counts() {
    static const std::map<std::string, long> kCounts = {
        {"Q1", 1500}, {"Q2", 1200}, {"Q3", 400},  {"Q4", 1000}, {"Q5", 200},  {"Q6", 600},  {"Q7", 400},
        {"Q8", 400},  {"Q9", 1000}, {"Q10", 1000}, {"Q11", 800}, {"Q12", 700}, {"Q13", 300}};
    return kCounts;
}

namespace {

[[noreturn]] void schema_error(const std::string& id, const std::string& field, const std::string& what) {
    throw Error(ErrorKind::SchemaError, "item '" + id + "' field '" + field + "': " + what, id + ":" + field);
}

}  // namespace

void validate_item(const QAItem& item) {
    if (text::trim(item.id).empty()) schema_error(item.id, "id", "empty");
    if (!task_number(item.task)) schema_error(item.id, "task", "must be one of Q1..Q13, got '" + item.task + "'");
    if (text::trim(item.question).empty()) schema_error(item.id, "question", "empty");
    std::set<std::string> seen;
    for (std::size_t i = 0; i < item.options.size(); ++i) {
        if (text::trim(item.options[i]).empty()) schema_error(item.id, "options", "O" + std::to_string(i + 1) + " is empty");
        if (!seen.insert(item.options[i]).second) schema_error(item.id, "options", "duplicate option '" + item.options[i] + "'");
    }
    if (item.answer_index < 1 || item.answer_index > 4) {
        schema_error(item.id, "answer_index", "must be 1..4, got " + std::to_string(item.answer_index));
    }
    for (const auto& m : item.materials) {
        if (text::trim(m).empty()) schema_error(item.id, "materials", "empty path");
    }
}

QAItem item_from_json(const json& doc) {
    if (!doc.is_object()) throw Error(ErrorKind::SchemaError, "item is not an object", doc.dump());
    QAItem item;
    const auto id = doc.contains("id") && doc["id"].is_string() ? doc["id"].get<std::string>() : std::string("?");
    item.id = id;
    const auto need_string = [&](const char* field) {
        if (!doc.contains(field) || !doc[field].is_string()) schema_error(id, field, "missing or not a string");
        return doc[field].get<std::string>();
    };
    item.id = need_string("id");
    item.task = need_string("task");
    item.question = need_string("question");
    if (!doc.contains("options") || !doc["options"].is_array()) schema_error(id, "options", "missing or not a list");
    const auto& opts = doc["options"];
    if (opts.size() != 4) schema_error(id, "options", "expected 4 options, got " + std::to_string(opts.size()));
    for (std::size_t i = 0; i < 4; ++i) {
        if (!opts[i].is_string()) schema_error(id, "options", "option " + std::to_string(i + 1) + " is not a string");
        item.options[i] = opts[i].get<std::string>();
    }
    if (!doc.contains("answer_index") || !doc["answer_index"].is_number_integer()) {
        schema_error(id, "answer_index", "missing or not an integer");
    }
    item.answer_index = doc["answer_index"].get<int>();
    if (doc.contains("materials")) {
        if (!doc["materials"].is_array()) schema_error(id, "materials", "not a list");
        for (const auto& m : doc["materials"]) {
            if (!m.is_string()) schema_error(id, "materials", "path is not a string");
            item.materials.push_back(m.get<std::string>());
        }
    }
    validate_item(item);
    if (doc.contains("modality")) {
        const auto tagged = doc["modality"].is_string() ? parse_category(doc["modality"].get<std::string>()) : std::nullopt;
        if (!tagged) schema_error(id, "modality", "must be Text, Image or Video");
        if (*tagged != item.modality()) {
            schema_error(id, "modality",
                         "task " + item.task + " is " + std::string(to_string(item.modality())) + ", not " +
                             std::string(to_string(*tagged)));
        }
    }
    return item;
}

json item_to_json(const QAItem& item) {
    return {{"id", item.id},
            {"task", item.task},
            {"modality", to_string(item.modality())},
            {"question", item.question},
            {"options", item.options},
            {"answer_index", item.answer_index},
            {"materials", item.materials}};
}

std::vector<QAItem> parse_dataset(std::string_view jsonl) {
    std::vector<QAItem> items;
    std::set<std::string> ids;
    std::size_t line_no = 0;
    for (const auto& line : text::split_lines(jsonl)) {
        ++line_no;
        if (text::trim(line).empty()) continue;
        json doc;
        try {
            doc = json::parse(line);
        } catch (const json::exception& e) {
            throw Error(ErrorKind::SchemaError, "line " + std::to_string(line_no) + ": " + e.what(), line);
        }
        auto item = item_from_json(doc);
        if (!ids.insert(item.id).second) schema_error(item.id, "id", "duplicate id");
        items.push_back(std::move(item));
    }
    return items;
}

std::vector<QAItem> load_dataset(const std::string& path) { return parse_dataset(text::read_file(path)); }

std::string render_dataset(const std::vector<QAItem>& items) {
    std::string out;
    for (const auto& item : items) out += item_to_json(item).dump() + "\n";
    return out;
}

std::map<std::string, long> task_counts(const std::vector<QAItem>& items) {
    std::map<std::string, long> counts;
    for (const auto& item : items) ++counts[item.task];
    return counts;
}

std::optional<int> parse_option_label(std::string_view response) {
    static const std::regex kLabel(R"((^|[^A-Za-z0-9])[Oo]([1-4])(?![0-9]))");
    const std::string s(response);
    std::smatch m;
    if (!std::regex_search(s, m, kLabel)) return std::nullopt;
    return m[2].str()[0] - '0';
}

std::string render_options(const std::array<std::string, 4>& options) {
    std::string out;
    for (std::size_t i = 0; i < options.size(); ++i) {
        if (i) out += "\n";
        out += "O" + std::to_string(i + 1) + ": " + options[i];
    }
    return out;
}

int choice_select(gateway::Gateway& gateway, std::string_view question, const std::array<std::string, 4>& options,
                  std::string_view open_answer, std::string_view agent_process) {
    std::string process(agent_process);
    if (!text::contains(process, open_answer)) process += "\nFinal answer: " + std::string(open_answer);
    const auto prompt = prompts::fill(prompts::kChoiceSelection, {{"question", std::string(question)},
                                                                  {"options", render_options(options)},
                                                                  {"process", process}});
    auto request = gateway::ChatRequest::user(prompt, "choice_select");
    std::string last;
    for (int attempt = 0; attempt < 2; ++attempt) {
        last = gateway.complete(request).text;
        if (auto idx = parse_option_label(last)) return *idx;
        request.messages.push_back({gateway::Role::Assistant, last});
        request.messages.push_back({gateway::Role::User, "Reply with exactly one of O1, O2, O3 or O4 and nothing else."});
    }
    throw Error(ErrorKind::Unmapped, "no option label in selector output", last.substr(0, 200));
}

double round_half_up(double value, int decimals) {
    const double scale = std::pow(10.0, decimals);
    // The nudge absorbs binary representation error at exact .5 boundaries.
    return std::floor(value * scale + 0.5 + 1e-9) / scale;
}

double percent(long correct, long n) {
    if (n <= 0) return 0.0;
    const long long tenths = (2000LL * correct + n) / (2LL * n);
    return static_cast<double>(tenths) / 10.0;
}

Aggregate aggregate(const std::map<int, double>& per_task_accuracy, const std::map<int, long>& per_task_counts) {
    std::map<Category, std::pair<double, long>> sums;
    double total = 0.0;
    long total_n = 0;
    for (const auto& [task, acc] : per_task_accuracy) {
        auto it = per_task_counts.find(task);
        if (it == per_task_counts.end() || it->second <= 0) {
            throw Error(ErrorKind::MissingTask, "no sample count for task " + task_label(task), task_label(task));
        }
        const auto cat = category_of(task_label(task));
        sums[cat].first += acc * static_cast<double>(it->second);
        sums[cat].second += it->second;
        total += acc * static_cast<double>(it->second);
        total_n += it->second;
    }
    Aggregate out;
    for (const auto& [cat, s] : sums) out.per_category[cat] = round_half_up(s.first / static_cast<double>(s.second));
    if (total_n > 0) out.overall = round_half_up(total / static_cast<double>(total_n));
    return out;
}

EvalReport summarize(const std::vector<QAItem>& items, const std::vector<ItemOutcome>& outcomes) {
    EvalReport report;
    for (std::size_t i = 0; i < items.size(); ++i) {
        const auto& item = items[i];
        const auto& o = outcomes[i];
        const int task = *task_number(item.task);
        auto& ts = report.per_task[task];
        auto& cs = report.per_category[item.modality()];
        ++ts.n;
        ++cs.n;
        ++report.overall.n;
        if (o.correct) {
            ++ts.correct;
            ++cs.correct;
            ++report.overall.correct;
        }
        if (!o.failure.empty()) report.failures.push_back({item.id, o.failure});
    }
    for (auto& [_, s] : report.per_task) s.accuracy = percent(s.correct, s.n);
    for (auto& [_, s] : report.per_category) s.accuracy = percent(s.correct, s.n);
    report.overall.accuracy = percent(report.overall.correct, report.overall.n);
    return report;
}

namespace {

std::string trace_file_name(const std::string& id) {
    std::string out;
    for (char c : id) out += (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.') ? c : '_';
    return out + ".json";
}

ItemOutcome evaluate_one(const QAItem& item, const AnswerFn& agent, gateway::Gateway& selector,
                         const EvalOptions& options) {
    ItemOutcome out;
    out.id = item.id;
    executor::ExecutionTrace trace;
    std::string answer;
    try {
        std::tie(answer, trace) = agent(item.question, item.materials);
    } catch (const std::exception& e) {
        out.failure = std::string("agent error: ") + e.what();
        return out;
    }
    if (!options.trace_dir.empty()) {
        text::write_file_atomic((std::filesystem::path(options.trace_dir) / trace_file_name(item.id)).string(),
                                executor::serialize_trace(trace));
    }
    if (!trace.completed()) {
        out.failure = "aborted: " + trace.abort_reason;
        return out;
    }
    try {
        out.selected = choice_select(selector, item.question, item.options, answer, executor::render_process(trace));
    } catch (const Error& e) {
        out.failure = e.what();
        return out;
    }
    out.correct = out.selected == item.answer_index;
    return out;
}

}  // namespace

EvalReport evaluate(const std::vector<QAItem>& items, const AnswerFn& agent, gateway::Gateway& selector,
                    const EvalOptions& options) {
    if (items.empty()) throw Error(ErrorKind::SchemaError, "dataset is empty", "");
    if (!options.trace_dir.empty()) std::filesystem::create_directories(options.trace_dir);
    std::vector<ItemOutcome> outcomes(items.size());
    std::atomic<std::size_t> next{0};
    const auto worker = [&] {
        for (std::size_t i = next++; i < items.size(); i = next++) {
            outcomes[i] = evaluate_one(items[i], agent, selector, options);
        }
    };
    const std::size_t width = std::max<std::size_t>(1, std::min(options.concurrency, items.size()));
    std::vector<std::thread> pool;
    for (std::size_t t = 1; t < width; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    return summarize(items, outcomes);
}

namespace {

std::string fixed1(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1f", v);
    return buf;
}

std::string pad(std::string s, std::size_t width) {
    if (s.size() < width) s.append(width - s.size(), ' ');
    return s;
}

}  // namespace

std::string render_report(const EvalReport& report, ReportFormat format) {
    if (format == ReportFormat::Json) {
        json per_task = json::object();
        for (const auto& [task, s] : report.per_task) {
            per_task[task_label(task)] = {{"n", s.n}, {"correct", s.correct}, {"accuracy", s.accuracy}};
        }
        json per_category = json::object();
        for (const auto& [cat, s] : report.per_category) {
            per_category[std::string(to_string(cat))] = {{"n", s.n}, {"correct", s.correct}, {"accuracy", s.accuracy}};
        }
        json failures = json::array();
        for (const auto& f : report.failures) failures.push_back({{"id", f.id}, {"reason", f.reason}});
        const json doc = {{"per_task", per_task},
                          {"per_category", per_category},
                          {"overall",
                           {{"n", report.overall.n},
                            {"correct", report.overall.correct},
                            {"accuracy", report.overall.accuracy}}},
                          {"failures", failures}};
        return doc.dump(2) + "\n";
    }

    std::string out = pad("Task", 6) + pad("Category", 10) + pad("N", 8) + pad("Correct", 9) + "Accuracy\n";
    for (const auto& [task, s] : report.per_task) {
        out += pad(task_label(task), 6) + pad(std::string(to_string(category_of(task_label(task)))), 10) +
               pad(std::to_string(s.n), 8) + pad(std::to_string(s.correct), 9) + fixed1(s.accuracy) + "\n";
    }
    out += "\n";
    for (const auto& [cat, s] : report.per_category) {
        out += pad(std::string(to_string(cat)), 16) + pad(std::to_string(s.n), 8) + pad(std::to_string(s.correct), 9) +
               fixed1(s.accuracy) + "\n";
    }
    out += pad("Overall", 16) + pad(std::to_string(report.overall.n), 8) + pad(std::to_string(report.overall.correct), 9) +
           fixed1(report.overall.accuracy) + "\n";
    out += "\nFailures: " + std::to_string(report.failures.size()) + "\n";
    for (const auto& f : report.failures) out += "  " + f.id + ": " + f.reason + "\n";
    return out;
}

}  // namespace pitchside::harness
