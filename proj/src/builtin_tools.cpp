#include "pitchside/builtin_tools.hpp"

#include <functional>
#include <map>

#include "pitchside/builtin_data.hpp"
#include "pitchside/error.hpp"
#include "pitchside/prompts.hpp"
#include "pitchside/text.hpp"

namespace pitchside::builtin {

using toolbox::BackendKind;
using toolbox::MediaKind;
using toolbox::ToolDescriptor;
using toolbox::ToolOutput;
using toolbox::ToolRequest;

namespace {

using RunFn = std::function<ToolOutput(const ToolDescriptor&, const ToolRequest&)>;

class FunctionBackend final : public toolbox::ToolBackend {
public:
    explicit FunctionBackend(RunFn fn) : fn_(std::move(fn)) {}
    ToolOutput run(const ToolDescriptor& d, const ToolRequest& r) const override { return fn_(d, r); }

private:
    RunFn fn_;
};

struct Spec {
    BackendKind kind;
    bool material_required;
    MediaKind media;
};

const std::map<std::string, Spec>& tool_specs() {
    static const std::map<std::string, Spec> kSpecs = {
        {"Choice Selection", {BackendKind::Prompted, false, MediaKind::Any}},
        {"LLM", {BackendKind::Prompted, false, MediaKind::Any}},
        {"Action Classifier", {BackendKind::Stub, true, MediaKind::Video}},
        {"Commentary Generation", {BackendKind::Stub, true, MediaKind::Video}},
        {"Foul Recognition", {BackendKind::Stub, true, MediaKind::Video}},
        {"Game Search", {BackendKind::Retrieval, false, MediaKind::Any}},
        {"Game Info Retrieval", {BackendKind::Retrieval, true, MediaKind::Any}},
        {"Match History Retrieval", {BackendKind::Retrieval, true, MediaKind::Any}},
        {"Textual Retrieval Augment", {BackendKind::Retrieval, true, MediaKind::Any}},
        {"Textual Entity Search", {BackendKind::Retrieval, false, MediaKind::Any}},
        {"Number Recognition", {BackendKind::Stub, true, MediaKind::Image}},
        {"Camera Detection", {BackendKind::Stub, true, MediaKind::ImageOrVideo}},
        {"Replay Grounding", {BackendKind::Stub, true, MediaKind::Video}},
        {"Entity Recognition", {BackendKind::Stub, true, MediaKind::Image}},
        {"Jersey Color Relevant VQA", {BackendKind::Stub, true, MediaKind::ImageOrVideo}},
        {"Segment", {BackendKind::Stub, true, MediaKind::Image}},
        {"Score and Time Recognition", {BackendKind::Stub, true, MediaKind::ImageOrVideo}},
        {"Frame Selection", {BackendKind::Stub, true, MediaKind::Video}},
    };
    return kSpecs;
}

std::string stub_prompt(const std::string& tool) {
    if (tool == "Camera Detection") return std::string(prompts::kCameraDetection);
    if (tool == "Number Recognition") return std::string(prompts::kJerseyNumber);
    if (tool == "Score and Time Recognition") return std::string(prompts::kScoreTime);
    return {};
}

std::string tag_for(const ToolDescriptor& d) { return "tool:" + d.name; }

std::string first_material(const ToolDescriptor& d, const ToolRequest& r) {
    if (r.materials.empty()) throw Error(ErrorKind::MaterialMissing, "tool '" + d.name + "' needs material input", d.name);
    return r.materials.front();
}

}  // namespace

const std::vector<std::pair<std::string, std::string>>& alias_table() {
    static const std::vector<std::pair<std::string, std::string>> kAliases = {
        {"Shot Change", "Camera Detection"},
        {"Vision Language Model", "Jersey Color Relevant VQA"},
        {"Jersey Color Recognition", "Jersey Color Relevant VQA"},
        {"Jersey Color VQA", "Jersey Color Relevant VQA"},
        {"Text Retrieval Augment", "Textual Retrieval Augment"},
        {"Textual Retrieval", "Textual Retrieval Augment"},
        {"Face Recognition", "Entity Recognition"},
        {"Match Search", "Game Search"},
        {"Match Info Retrieval", "Game Info Retrieval"},
        {"Answer Selection", "Choice Selection"},
        {"LLM Tool", "LLM"},
        {"Jersey Number Recognition", "Number Recognition"},
        {"Score/Time Recognition", "Score and Time Recognition"},
        {"Entity Search", "Textual Entity Search"},
    };
    return kAliases;
}

std::shared_ptr<toolbox::Registry> make_registry(const BuiltinDeps& deps) {
    auto registry = std::make_shared<toolbox::Registry>();
    auto gw = deps.gateway;
    auto corpus = deps.corpus ? deps.corpus : std::make_shared<const kb::Corpus>();
    auto fixtures = deps.fixtures ? deps.fixtures : std::make_shared<const toolbox::FixtureTable>();

    const auto need_gateway = [gw](const ToolDescriptor& d) -> gateway::Gateway& {
        if (!gw) throw Error(ErrorKind::BackendFailure, "tool '" + d.name + "' needs a model gateway", d.name);
        return *gw;
    };

    std::map<std::string, RunFn> functions;
    functions["LLM"] = [=](const ToolDescriptor& d, const ToolRequest& r) {
        auto req = gateway::ChatRequest::user(r.query, tag_for(d), r.materials);
        return ToolOutput{need_gateway(d).complete(req).text, {}};
    };
    functions["Choice Selection"] = [=](const ToolDescriptor& d, const ToolRequest& r) {
        const std::string prompt =
            "Pick the option ('O1', 'O2', 'O3' or 'O4') that best matches the answer below. "
            "Reply with the option label only.\n\n" +
            r.query;
        return ToolOutput{need_gateway(d).complete(gateway::ChatRequest::user(prompt, tag_for(d), r.materials)).text, {}};
    };
    functions["Game Search"] = [=](const ToolDescriptor& d, const ToolRequest& r) {
        const auto outcome = kb::game_search(*corpus, need_gateway(d), r.query);
        ToolOutput out{kb::render_outcome(outcome), {}};
        if (outcome.kind == kb::SearchOutcome::Kind::Single) out.produced_files.push_back(outcome.file_path);
        return out;
    };
    functions["Game Info Retrieval"] = [=](const ToolDescriptor& d, const ToolRequest& r) {
        return ToolOutput{kb::game_info_retrieval(need_gateway(d), r.query, first_material(d, r)), {}};
    };
    functions["Match History Retrieval"] = [=](const ToolDescriptor& d, const ToolRequest& r) {
        return ToolOutput{kb::match_history_retrieval(need_gateway(d), r.query, first_material(d, r)), {}};
    };
    functions["Textual Entity Search"] = [=](const ToolDescriptor& d, const ToolRequest& r) {
        const auto res = kb::entity_search(*corpus, need_gateway(d), r.query);
        if (!res.lookup.record) {
            if (kb::is_unknown(res.kind) || kb::is_unknown(res.name)) {
                return ToolOutput{"No entity could be identified in the question.", {}};
            }
            return ToolOutput{"No page found in the entity database for " + res.kind + " '" + res.name + "'.", {}};
        }
        const auto& rec = *res.lookup.record;
        if (rec.source_path.empty()) return ToolOutput{rec.page, {}};
        return ToolOutput{"Found " + std::string(kb::to_string(rec.kind)) + " '" + rec.name +
                              "'. Entity page file: " + rec.source_path,
                          {rec.source_path}};
    };
    functions["Textual Retrieval Augment"] = [=](const ToolDescriptor& d, const ToolRequest& r) {
        const auto path = first_material(d, r);
        const auto contents = text::read_file(path);
        std::string page = contents;
        try {
            page = kb::parse_entity_file(contents, path).page;
        } catch (const Error&) {
            // not an entity file: use the raw document
        }
        const auto prompt = prompts::fill(prompts::kTextualRetrieval, {{"query", r.query}, {"page", page}});
        return ToolOutput{need_gateway(d).complete(gateway::ChatRequest::user(prompt, tag_for(d))).text, {}};
    };

    for (const auto& descriptor : tool_descriptors()) {
        const auto& spec = tool_specs().at(descriptor.name);
        toolbox::ToolBinding binding;
        binding.descriptor = descriptor;
        binding.kind = spec.kind;
        binding.material_required = spec.material_required;
        binding.media = spec.media;
        if (spec.kind == BackendKind::Stub) {
            std::optional<toolbox::AdapterConfig> adapter;
            for (const auto& a : deps.adapters) {
                if (a.tool == descriptor.name) adapter = a;
            }
            binding.fixtures = fixtures;
            binding.backend = std::make_shared<toolbox::StubBackend>(stub_prompt(descriptor.name), fixtures, adapter);
        } else {
            binding.backend = std::make_shared<FunctionBackend>(functions.at(descriptor.name));
        }
        registry->add(std::move(binding));
    }
    for (const auto& [alias, canonical] : alias_table()) registry->add_alias(alias, canonical);
    return registry;
}

}  // namespace pitchside::builtin
