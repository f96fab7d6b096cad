#include "pitchside/curation.hpp"

#include <algorithm>
#include <regex>
#include <set>

#include "pitchside/error.hpp"
#include "pitchside/prompts.hpp"
#include "pitchside/text.hpp"

namespace pitchside::curation {

using harness::QAItem;
using nlohmann::json;

std::vector<AnnotationRecord> parse_annotations(std::string_view jsonl) {
    std::vector<AnnotationRecord> out;
    std::set<std::string> ids;
    std::size_t line_no = 0;
    for (const auto& line : text::split_lines(jsonl)) {
        ++line_no;
        if (text::trim(line).empty()) continue;
        const auto where = "annotation line " + std::to_string(line_no);
        try {
            const auto doc = json::parse(line);
            AnnotationRecord r;
            r.id = doc.at("id").get<std::string>();
            r.source = doc.value("source", std::string());
            r.task = doc.at("task").get<std::string>();
            r.payload = doc.value("payload", json::object());
            r.materials = doc.value("materials", std::vector<std::string>{});
            if (!harness::task_number(r.task)) {
                throw Error(ErrorKind::SchemaError, where + ": unknown task '" + r.task + "'", r.id);
            }
            if (!r.payload.is_object()) throw Error(ErrorKind::SchemaError, where + ": payload must be an object", r.id);
            if (!ids.insert(r.id).second) throw Error(ErrorKind::SchemaError, where + ": duplicate id '" + r.id + "'", r.id);
            out.push_back(std::move(r));
        } catch (const json::exception& e) {
            throw Error(ErrorKind::SchemaError, where + ": " + e.what(), line);
        }
    }
    return out;
}

std::vector<AnnotationRecord> load_annotations(const std::string& path) {
    return parse_annotations(text::read_file(path));
}

LabelPools load_label_pools(const std::string& path) {
    try {
        return json::parse(text::read_file(path)).get<LabelPools>();
    } catch (const json::exception& e) {
        throw Error(ErrorKind::ParseError, path + ": " + e.what(), path);
    }
}

namespace {

std::string payload_string(const json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); }

}  // namespace

void validate_record(const AnnotationRecord& record, const LabelPools& pools) {
    auto it = pools.find(record.task);
    if (it == pools.end()) return;
    if (!record.payload.contains("label")) {
        throw Error(ErrorKind::SchemaError, "record '" + record.id + "' has no label", record.id);
    }
    const auto label = payload_string(record.payload["label"]);
    if (std::find(it->second.begin(), it->second.end(), label) == it->second.end()) {
        throw Error(ErrorKind::SchemaError,
                    "record '" + record.id + "' label '" + label + "' is not a " + record.task + " class", record.id);
    }
}

TemplateBank parse_templates(const json& doc) {
    TemplateBank bank;
    if (!doc.is_object()) throw Error(ErrorKind::ParseError, "template bank must be an object", doc.dump());
    for (const auto& [task, list] : doc.items()) {
        if (!harness::task_number(task)) throw Error(ErrorKind::ParseError, "unknown task '" + task + "'", task);
        for (const auto& t : list) {
            bank[task].push_back({t.at("question").get<std::string>(), t.value("answer", std::string("{label}"))});
        }
    }
    return bank;
}

TemplateBank load_templates(const std::string& path) {
    try {
        return parse_templates(json::parse(text::read_file(path)));
    } catch (const json::exception& e) {
        throw Error(ErrorKind::ParseError, path + ": " + e.what(), path);
    }
}

std::uint64_t derive_seed(std::uint64_t global_seed, std::string_view record_id) {
    std::string buf(8, '\0');
    for (int i = 0; i < 8; ++i) buf[i] = static_cast<char>((global_seed >> (8 * i)) & 0xff);
    return text::fnv1a64(record_id, text::fnv1a64(buf));
}

std::size_t uniform_index(std::mt19937_64& rng, std::size_t n) {
    const std::uint64_t bound = static_cast<std::uint64_t>(n);
    const std::uint64_t limit = std::mt19937_64::max() - (std::mt19937_64::max() % bound + 1) % bound;
    std::uint64_t r;
    do {
        r = rng();
    } while (r > limit);
    return static_cast<std::size_t>(r % bound);
}

namespace {

std::string fill_from_payload(const std::string& tmpl, const AnnotationRecord& record) {
    static const std::regex kPlaceholder(R"(\{([A-Za-z_][A-Za-z0-9_]*)\})");
    std::map<std::string, std::string> values;
    for (auto it = std::sregex_iterator(tmpl.begin(), tmpl.end(), kPlaceholder); it != std::sregex_iterator(); ++it) {
        const auto field = (*it)[1].str();
        if (!record.payload.contains(field)) {
            throw Error(ErrorKind::GenerationRejected,
                        "record '" + record.id + "' payload lacks field '" + field + "'", record.id);
        }
        values[field] = payload_string(record.payload[field]);
    }
    return prompts::fill(tmpl, values);
}

}  // namespace

OpenQA template_generate(const TemplateBank& bank, const AnnotationRecord& record, std::uint64_t seed) {
    auto it = bank.find(record.task);
    if (it == bank.end() || it->second.empty()) {
        throw Error(ErrorKind::NoTemplate, "no template for task " + record.task, record.task);
    }
    std::mt19937_64 rng(derive_seed(seed, record.id));
    const auto& t = it->second[uniform_index(rng, it->second.size())];
    OpenQA qa;
    qa.question = fill_from_payload(t.question, record);
    qa.answer = text::trim(fill_from_payload(t.answer, record));
    if (qa.answer.empty()) throw Error(ErrorKind::GenerationRejected, "empty answer for record '" + record.id + "'", record.id);
    qa.task = record.task;
    qa.source_id = record.id;
    qa.mode = "template";
    qa.materials = record.materials;
    return qa;
}

namespace {

std::string collapse_ws(std::string_view s) {
    std::string out;
    bool space = false;
    for (char c : s) {
        if (std::isspace(static_cast<unsigned char>(c))) {
            space = !out.empty();
            continue;
        }
        if (space) out += ' ';
        space = false;
        out += c;
    }
    return out;
}

}  // namespace

OpenQA model_generate(gateway::Gateway& gateway, const AnnotationRecord& record, std::string_view context) {
    const auto prompt = prompts::fill(prompts::kQaGeneration, {{"task", record.task}, {"context", std::string(context)}});
    const auto reply = gateway.complete(gateway::ChatRequest::user(prompt, "curation:" + record.task)).text;
    std::map<std::string, std::string> fields;
    for (const auto& line : text::split_lines(reply)) {
        const auto t = text::trim(line);
        for (const char* key : {"Question:", "Answer:", "Reference:"}) {
            const std::string k(key);
            if (t.rfind(k, 0) == 0 && !fields.count(k)) fields[k] = text::trim(t.substr(k.size()));
        }
    }
    for (const char* key : {"Question:", "Answer:", "Reference:"}) {
        if (fields[key].empty()) {
            throw Error(ErrorKind::GenerationRejected,
                        "record '" + record.id + "': missing '" + std::string(key) + "' line", reply.substr(0, 200));
        }
    }
    auto reference = fields["Reference:"];
    if (reference.size() >= 2 && reference.front() == '"' && reference.back() == '"') {
        reference = reference.substr(1, reference.size() - 2);
    }
    if (!text::contains(collapse_ws(context), collapse_ws(reference))) {
        throw Error(ErrorKind::GenerationRejected, "record '" + record.id + "': reference not found in context",
                    reference);
    }
    return {fields["Question:"], fields["Answer:"], record.task, record.id, "model", reference, record.materials};
}

std::vector<std::string> parse_distractors(std::string_view response) {
    static const std::regex kMarker(R"(^\s*(?:[-*•]|\d+[.)]|[Oo]\d[:.)])\s*)");
    std::vector<std::string> out;
    for (const auto& line : text::split_lines(response)) {
        auto t = text::trim(std::regex_replace(line, kMarker, ""));
        if (t.size() >= 2 && t.front() == '"' && t.back() == '"') t = text::trim(t.substr(1, t.size() - 2));
        if (!t.empty()) out.push_back(std::move(t));
    }
    return out;
}

QAItem to_multichoice(const OpenQA& qa, const std::vector<std::string>& pool, Strategy strategy, std::uint64_t seed,
                      gateway::Gateway* gateway) {
    std::mt19937_64 rng(derive_seed(seed, qa.source_id));
    const auto answer_norm = text::normalize(qa.answer);
    std::vector<std::string> distractors;

    if (strategy == Strategy::Category) {
        std::vector<std::string> candidates;
        std::set<std::string> seen{answer_norm};
        for (const auto& label : pool) {
            if (text::trim(label).empty()) continue;
            if (seen.insert(text::normalize(label)).second) candidates.push_back(label);
        }
        if (candidates.size() < 3) {
            throw Error(ErrorKind::PoolTooSmall,
                        "pool offers " + std::to_string(candidates.size()) + " labels distinct from the answer, need 3",
                        qa.source_id);
        }
        for (std::size_t i = 0; i < 3; ++i) {
            const auto j = i + uniform_index(rng, candidates.size() - i);
            std::swap(candidates[i], candidates[j]);
            distractors.push_back(candidates[i]);
        }
    } else {
        if (!gateway) throw Error(ErrorKind::ConfuserRejected, "confuser strategy needs a model gateway", qa.source_id);
        const auto prompt = prompts::fill(prompts::kConfuser, {{"question", qa.question}, {"answer", qa.answer}});
        const auto reply = gateway->complete(gateway::ChatRequest::user(prompt, "curation:confuser")).text;
        auto lines = parse_distractors(reply);
        std::set<std::string> seen{answer_norm};
        for (const auto& l : lines) {
            const auto n = text::normalize(l);
            if (n.empty() || !seen.insert(n).second) {
                throw Error(ErrorKind::ConfuserRejected, "duplicate or degenerate distractor '" + l + "'", reply);
            }
        }
        if (lines.size() < 3) {
            throw Error(ErrorKind::ConfuserRejected, "expected 3 distractors, got " + std::to_string(lines.size()), reply);
        }
        distractors.assign(lines.begin(), lines.begin() + 3);
    }

    const auto slot = uniform_index(rng, 4);
    QAItem item;
    item.id = qa.source_id;
    item.task = qa.task;
    item.question = qa.question;
    item.materials = qa.materials;
    item.answer_index = static_cast<int>(slot) + 1;
    std::size_t d = 0;
    for (std::size_t i = 0; i < 4; ++i) item.options[i] = i == slot ? qa.answer : distractors[d++];
    harness::validate_item(item);
    return item;
}

ValidationReport validate_dataset(const std::vector<QAItem>& items, const std::map<std::string, long>& targets) {
    ValidationReport report;
    std::map<std::string, std::string> first_by_question;
    std::map<std::string, long> counts;
    std::set<std::string> ids;
    for (const auto& item : items) {
        try {
            harness::validate_item(item);
        } catch (const Error& e) {
            report.findings.push_back({item.id, "invalid", e.what()});
        }
        if (!ids.insert(item.id).second) report.findings.push_back({item.id, "invalid", "duplicate id"});
        const auto key = text::normalize(item.question) + "\x1f" + text::join(item.materials, "\x1f");
        auto [it, fresh] = first_by_question.emplace(key, item.id);
        if (!fresh) {
            report.findings.push_back({item.id, "duplicate", "same question as '" + it->second + "'"});
            report.duplicate_of[item.id] = it->second;
        }
        ++counts[item.task];
    }
    for (int t = 1; t <= 13; ++t) {
        const auto label = harness::task_label(t);
        const auto target = targets.count(label) ? targets.at(label) : 0;
        report.balance.push_back({label, counts.count(label) ? counts[label] : 0, target});
    }
    return report;
}

std::string render_findings(const ValidationReport& report) {
    std::string out = "Findings: " + std::to_string(report.findings.size()) + "\n";
    for (const auto& f : report.findings) out += "  " + f.id + " [" + f.kind + "] " + f.detail + "\n";
    out += "\nTask\tCount\tTarget\tDelta\n";
    for (const auto& b : report.balance) {
        const auto delta = b.count - b.target;
        out += b.task + "\t" + std::to_string(b.count) + "\t" + std::to_string(b.target) + "\t" +
               (delta > 0 ? "+" : "") + std::to_string(delta) + "\n";
    }
    return out;
}

namespace {

std::string cell(std::string s) {
    for (auto& c : s) {
        if (c == '\t' || c == '\n' || c == '\r') c = ' ';
    }
    return s;
}

}  // namespace

std::string render_worksheet(const std::vector<QAItem>& items, const ValidationReport& report) {
    std::map<std::string, std::vector<std::string>> issues;
    for (const auto& f : report.findings) issues[f.id].push_back(f.kind + ": " + f.detail);
    std::string out = "id\ttask\tquestion\tanswer\tduplicate_of\tissues\tkeep\n";
    for (const auto& item : items) {
        const bool valid_answer = item.answer_index >= 1 && item.answer_index <= 4;
        const auto dup = report.duplicate_of.count(item.id) ? report.duplicate_of.at(item.id) : std::string();
        const auto& iss = issues[item.id];
        out += cell(item.id) + "\t" + cell(item.task) + "\t" + cell(item.question) + "\t" +
               cell(valid_answer ? item.options[static_cast<std::size_t>(item.answer_index - 1)] : "") + "\t" +
               cell(dup) + "\t" + cell(text::join(iss, "; ")) + "\t" + (iss.empty() ? "yes" : "review") + "\n";
    }
    return out;
}

}  // namespace pitchside::curation
