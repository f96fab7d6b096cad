#include "pitchside/planner.hpp"

#include <algorithm>
#include <map>
#include <regex>

#include "pitchside/error.hpp"
#include "pitchside/prompts.hpp"
#include "pitchside/protocol.hpp"
#include "pitchside/text.hpp"

namespace pitchside::planner {

using toolbox::MediaKind;

std::string render_catalog(const std::vector<TaskCatalogEntry>& catalog) {
    std::string out;
    for (std::size_t i = 0; i < catalog.size(); ++i) {
        const auto& t = catalog[i];
        if (i) out += "\n\n";
        out += "Task" + std::to_string(t.index) + ": ****" + t.title + "**** " + t.description + "\n\n";
        out += "Recommended chain: " + text::join(t.recommended_chain, " -> ");
    }
    return out;
}

std::vector<TaskCatalogEntry> parse_catalog(std::string_view body) {
    static const std::regex kTaskLine(R"(^Task(\d+):\s*\*+(.+?)\*+\s*(.*)$)");
    std::vector<TaskCatalogEntry> out;
    std::size_t line_no = 0;
    for (const auto& raw : text::split_lines(body)) {
        ++line_no;
        const auto line = text::trim(raw);
        if (line.empty()) continue;
        std::smatch m;
        if (std::regex_match(line, m, kTaskLine)) {
            out.push_back({std::stoi(m[1].str()), text::trim(m[2].str()), text::trim(m[3].str()), {}});
        } else if (line.rfind("Recommended chain:", 0) == 0) {
            if (out.empty()) {
                throw Error(ErrorKind::ParseError, "line " + std::to_string(line_no) + ": chain before any task",
                            line);
            }
            out.back().recommended_chain.clear();
            for (auto& part : text::split(line.substr(std::string_view("Recommended chain:").size()), "->")) {
                auto name = text::trim(part);
                if (!name.empty()) out.back().recommended_chain.push_back(std::move(name));
            }
        } else if (!out.empty() && out.back().recommended_chain.empty()) {
            out.back().description += " " + line;  // wrapped description
        } else {
            throw Error(ErrorKind::ParseError, "line " + std::to_string(line_no) + ": unexpected text", line);
        }
    }
    for (const auto& t : out) {
        if (t.recommended_chain.empty()) {
            throw Error(ErrorKind::ParseError, "task " + std::to_string(t.index) + " has no recommended chain",
                        t.title);
        }
    }
    return out;
}

std::vector<TaskCatalogEntry> load_catalog(const std::string& path) { return parse_catalog(text::read_file(path)); }

std::pair<std::string, int> split_repetition(std::string_view name) {
    static const std::regex kRepeat(R"(^(.*?)\s*\(\s*(once|twice|thrice|(\w+)\s+times)\s*\)\s*$)",
                                    std::regex::icase);
    static const std::map<std::string, int> kWords = {{"one", 1},   {"two", 2},   {"three", 3}, {"four", 4},
                                                      {"five", 5},  {"six", 6},   {"seven", 7}, {"eight", 8},
                                                      {"nine", 9},  {"ten", 10}};
    const std::string s(name);
    std::smatch m;
    if (!std::regex_match(s, m, kRepeat)) return {text::trim(s), 1};
    const auto word = text::to_lower(m[2].str());
    int count = 1;
    if (word == "once") {
        count = 1;
    } else if (word == "twice") {
        count = 2;
    } else if (word == "thrice") {
        count = 3;
    } else {
        const auto n = text::to_lower(m[3].str());
        if (auto it = kWords.find(n); it != kWords.end()) {
            count = it->second;
        } else if (!n.empty() && std::all_of(n.begin(), n.end(), ::isdigit)) {
            count = std::stoi(n);
        } else {
            return {text::trim(s), 1};
        }
    }
    return {text::trim(m[1].str()), count};
}

std::string material_manifest(const std::vector<std::string>& materials) {
    if (materials.empty()) return "None";
    std::vector<std::pair<std::string, std::vector<std::string>>> groups;
    for (const auto& m : materials) {
        const auto kind = toolbox::media_of(m);
        const std::string role = kind == MediaKind::Video ? "video" : kind == MediaKind::Image ? "image" : "file";
        auto it = std::find_if(groups.begin(), groups.end(), [&](const auto& g) { return g.first == role; });
        if (it == groups.end()) {
            groups.push_back({role, {}});
            it = std::prev(groups.end());
        }
        it->second.push_back(m);
    }
    std::vector<std::string> parts;
    for (const auto& [role, paths] : groups) {
        std::vector<std::string> quoted;
        for (const auto& p : paths) quoted.push_back("\"" + p + "\"");
        parts.push_back("\"" + role + "\": {" + text::join(quoted, ", ") + "}");
    }
    return text::join(parts, ", ");
}

namespace {

bool produces_material(std::string_view canonical) {
    return canonical == "Frame Selection" || canonical == "Game Search" || canonical == "Textual Entity Search";
}

}  // namespace

ValidatedChain validate_chain(const std::vector<std::string>& chain, const toolbox::Registry& registry,
                              const std::vector<std::string>& question_materials) {
    if (chain.empty()) throw Error(ErrorKind::EmptyChain, "tool chain has no tools");
    ValidatedChain out;
    for (const auto& raw : chain) {
        auto [base, count] = split_repetition(raw);
        auto canonical = registry.canonical_name(base);
        if (!canonical) {
            auto sugg = registry.suggestions(base);
            std::string msg = "unknown tool '" + base + "'";
            if (!sugg.empty()) msg += "; did you mean: " + text::join(sugg, ", ");
            throw Error(ErrorKind::UnknownTool, msg, base, std::move(sugg));
        }
        for (int i = 0; i < count; ++i) out.chain.push_back(*canonical);
    }

    bool has_image = false, has_video = false, has_other = !question_materials.empty();
    for (const auto& m : question_materials) {
        has_image |= toolbox::media_of(m) == MediaKind::Image;
        has_video |= toolbox::media_of(m) == MediaKind::Video;
    }
    bool produced_image = false, produced_any = false;
    for (std::size_t i = 0; i < out.chain.size(); ++i) {
        const auto& binding = registry.resolve(out.chain[i]);
        if (binding.material_required) {
            bool ok = true;
            switch (binding.media) {
                case MediaKind::Image: ok = has_image || produced_image; break;
                case MediaKind::Video: ok = has_video; break;
                case MediaKind::ImageOrVideo: ok = has_image || has_video || produced_image; break;
                case MediaKind::Any: ok = has_other || produced_any; break;
            }
            if (!ok) {
                out.warnings.push_back("step " + std::to_string(i + 1) + " (" + out.chain[i] +
                                       ") needs material input but no earlier step or question material provides it");
            }
        }
        if (produces_material(out.chain[i])) {
            produced_any = true;
            produced_image |= out.chain[i] == "Frame Selection";
        }
    }
    return out;
}

std::string build_planning_prompt(std::string_view question, const std::vector<std::string>& materials,
                                  const toolbox::Registry& registry,
                                  const std::vector<TaskCatalogEntry>& catalog) {
    std::string prompt = prompts::fill(prompts::kPlanning, {{"toolbox_descriptions", toolbox::render_descriptions(registry)},
                                                            {"tasks", render_catalog(catalog)}});
    prompt += prompts::fill(prompts::kPlanningQuery,
                            {{"question", std::string(question)}, {"material", material_manifest(materials)}});
    return prompt;
}

Planner::Planner(std::shared_ptr<gateway::Gateway> gateway, std::shared_ptr<const toolbox::Registry> registry,
                 std::vector<TaskCatalogEntry> catalog, PlannerConfig config)
    : gateway_(std::move(gateway)), registry_(std::move(registry)), catalog_(std::move(catalog)), config_(config) {}

PlanResult Planner::plan(std::string_view question, const std::vector<std::string>& materials) const {
    const std::string prompt = build_planning_prompt(question, materials, *registry_, catalog_);
    PlanResult result;
    gateway::ChatRequest request = gateway::ChatRequest::user(prompt, "planner", materials);

    for (int attempt = 0; attempt <= config_.max_plan_retries; ++attempt) {
        ++result.attempts;
        std::string raw;
        std::string failure;
        try {
            raw = gateway_->complete(request).text;
            result.raw_responses.push_back(raw);
            const auto parsed = protocol::parse_plan(raw);
            auto validated = validate_chain(parsed.chain, *registry_, materials);
            result.known_info = parsed.known_info;
            result.chain = std::move(validated.chain);
            result.warnings = std::move(validated.warnings);
            result.raw_response = raw;
            return result;
        } catch (const Error& e) {
            if (raw.empty()) result.raw_responses.push_back(std::string("<gateway error: ") + e.what() + ">");
            failure = e.what();
        }
        // Continue the conversation with the failed answer and a repair note.
        request.messages.resize(1);
        request.messages.push_back({gateway::Role::Assistant, raw});
        request.messages.push_back({gateway::Role::User, prompts::fill(prompts::kPlanRepair, {{"error", failure}})});
    }
    throw Error(ErrorKind::PlanFailed,
                "no valid plan after " + std::to_string(result.attempts) + " attempts",
                text::join(result.raw_responses, "\n---\n"));
}

}  // namespace pitchside::planner
