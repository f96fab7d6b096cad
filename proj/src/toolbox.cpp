#include "pitchside/toolbox.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cstdio>
#include <filesystem>
#include <unistd.h>

#include <nlohmann/json.hpp>

#include "pitchside/error.hpp"
#include "pitchside/model_gateway.hpp"
#include "pitchside/text.hpp"

namespace pitchside::toolbox {

namespace fs = std::filesystem;
using nlohmann::json;

// --- fixtures ---------------------------------------------------------------

FixtureTable::FixtureTable(std::vector<FixtureRecord> records) : records_(std::move(records)) {}

std::shared_ptr<FixtureTable> FixtureTable::load(const std::string& path) {
    json doc;
    try {
        doc = json::parse(text::read_file(path));
    } catch (const json::exception& e) {
        throw Error(ErrorKind::ParseError, path + ": " + e.what(), path);
    }
    if (!doc.is_array()) throw Error(ErrorKind::ParseError, path + ": fixture table must be an array", path);
    auto table = std::make_shared<FixtureTable>();
    for (std::size_t i = 0; i < doc.size(); ++i) {
        try {
            const auto& row = doc[i];
            table->add({row.at("tool").get<std::string>(), row.value("query_pattern", std::string()),
                        row.value("materials_pattern", std::string()), row.at("output_text").get<std::string>(),
                        row.value("produced_files", std::vector<std::string>{})});
        } catch (const json::exception& e) {
            throw Error(ErrorKind::ParseError, path + ": record " + std::to_string(i) + ": " + e.what(), path);
        }
    }
    return table;
}

void FixtureTable::add(FixtureRecord record) { records_.push_back(std::move(record)); }

std::optional<ToolOutput> FixtureTable::lookup(std::string_view tool, const ToolRequest& request) const {
    auto materials_match = [&](const FixtureRecord& r) {
        if (r.materials_pattern.empty()) return true;
        return std::any_of(request.materials.begin(), request.materials.end(),
                           [&](const std::string& m) { return text::contains(m, r.materials_pattern); });
    };
    for (const auto& r : records_) {
        if (r.tool == tool && r.query_pattern == request.query && materials_match(r)) {
            return ToolOutput{r.output_text, r.produced_files};
        }
    }
    for (const auto& r : records_) {
        if (r.tool == tool && text::contains(request.query, r.query_pattern) && materials_match(r)) {
            return ToolOutput{r.output_text, r.produced_files};
        }
    }
    return std::nullopt;
}

std::vector<AdapterConfig> load_adapters(const std::string& path) {
    std::vector<AdapterConfig> out;
    try {
        const json doc = json::parse(text::read_file(path));
        for (const auto& row : doc) {
            AdapterConfig a;
            a.tool = row.at("tool").get<std::string>();
            const auto mode = row.at("mode").get<std::string>();
            if (mode == "command") {
                a.mode = AdapterConfig::Mode::Command;
            } else if (mode == "endpoint") {
                a.mode = AdapterConfig::Mode::Endpoint;
            } else {
                throw Error(ErrorKind::ParseError, path + ": unknown adapter mode '" + mode + "'", path);
            }
            a.target = row.at("target").get<std::string>();
            out.push_back(std::move(a));
        }
    } catch (const json::exception& e) {
        throw Error(ErrorKind::ParseError, path + ": " + e.what(), path);
    }
    return out;
}

// --- stub backend -----------------------------------------------------------

StubBackend::StubBackend(std::string prompt, std::shared_ptr<const FixtureTable> fixtures,
                         std::optional<AdapterConfig> adapter)
    : prompt_(std::move(prompt)), fixtures_(std::move(fixtures)), adapter_(std::move(adapter)) {}

namespace {

ToolOutput parse_adapter_reply(const std::string& body) {
    const std::string trimmed = text::trim(body);
    if (!trimmed.empty() && trimmed.front() == '{') {
        try {
            const json doc = json::parse(trimmed);
            return ToolOutput{doc.at("text").get<std::string>(),
                              doc.value("produced_files", std::vector<std::string>{})};
        } catch (const json::exception&) {
            // fall through: treat as plain text
        }
    }
    return ToolOutput{trimmed, {}};
}

std::string shell_quote(const std::string& s) { return "'" + text::replace_all(s, "'", "'\\''") + "'"; }

}  // namespace

ToolOutput StubBackend::run(const ToolDescriptor& descriptor, const ToolRequest& request) const {
    if (adapter_) {
        const json payload = {{"tool", descriptor.name},
                              {"prompt", prompt_},
                              {"query", request.query},
                              {"materials", request.materials}};
        return adapter_->mode == AdapterConfig::Mode::Command ? run_command(payload.dump())
                                                              : run_endpoint(payload.dump());
    }
    if (fixtures_) {
        if (auto hit = fixtures_->lookup(descriptor.name, request)) return *hit;
    }
    throw Error(ErrorKind::FixtureMiss,
                "no fixture for tool '" + descriptor.name + "' with query '" + request.query + "'", descriptor.name);
}

ToolOutput StubBackend::run_command(const std::string& payload) const {
    static std::atomic<unsigned> counter{0};
    const fs::path tmp = fs::temp_directory_path() /
                         ("pitchside-adapter-" + std::to_string(::getpid()) + "-" + std::to_string(counter++) + ".json");
    text::write_file_atomic(tmp.string(), payload);
    const std::string cmd = adapter_->target + " < " + shell_quote(tmp.string());
    FILE* pipe = ::popen(cmd.c_str(), "r");
    if (!pipe) {
        fs::remove(tmp);
        throw Error(ErrorKind::BackendFailure, "cannot start adapter command", adapter_->target);
    }
    std::string out;
    std::array<char, 4096> buf{};
    while (std::size_t n = std::fread(buf.data(), 1, buf.size(), pipe)) out.append(buf.data(), n);
    const int status = ::pclose(pipe);
    std::error_code ec;
    fs::remove(tmp, ec);
    if (status != 0) {
        throw Error(ErrorKind::BackendFailure, "adapter command exited with status " + std::to_string(status),
                    adapter_->target);
    }
    return parse_adapter_reply(out);
}

ToolOutput StubBackend::run_endpoint(const std::string& payload) const {
    gateway::HttpPost post;
    post.url = adapter_->target;
    post.headers.emplace_back("Content-Type", "application/json");
    post.body = payload;
    const auto res = gateway::http_post(post);
    if (res.failure != gateway::HttpResult::Failure::None) {
        throw Error(ErrorKind::BackendFailure, "adapter endpoint unreachable: " + res.error, adapter_->target);
    }
    if (res.status < 200 || res.status >= 300) {
        throw Error(ErrorKind::BackendFailure, "adapter endpoint returned HTTP " + std::to_string(res.status),
                    adapter_->target);
    }
    return parse_adapter_reply(res.body);
}

// --- registry ---------------------------------------------------------------

MediaKind media_of(std::string_view path) {
    const auto ext = text::to_lower(fs::path(std::string(path)).extension().string());
    static const std::set<std::string> kImage = {".png", ".jpg", ".jpeg", ".bmp", ".webp", ".gif"};
    static const std::set<std::string> kVideo = {".mp4", ".avi", ".mkv", ".mov", ".webm", ".mpeg", ".mpg"};
    if (kImage.count(ext)) return MediaKind::Image;
    if (kVideo.count(ext)) return MediaKind::Video;
    return MediaKind::Any;
}

Registry& Registry::add(ToolBinding binding) {
    const auto& d = binding.descriptor;
    for (const auto* field : {&d.name, &d.ability, &d.query_input, &d.material_input, &d.output, &d.remark}) {
        if (text::trim(*field).empty()) {
            throw Error(ErrorKind::InvalidRequest, "descriptor '" + d.name + "' has an empty field", d.name);
        }
    }
    if (!binding.backend) throw Error(ErrorKind::InvalidRequest, "tool '" + d.name + "' has no backend", d.name);
    if (binding.kind == BackendKind::Stub && !binding.fixtures) {
        throw Error(ErrorKind::InvalidRequest, "stub tool '" + d.name + "' declares no fixture table", d.name);
    }
    if (index_.count(d.name) || aliases_.count(d.name)) {
        throw Error(ErrorKind::DuplicateName, "tool '" + d.name + "' already registered", d.name);
    }
    index_.emplace(d.name, bindings_.size());
    bindings_.push_back(std::move(binding));
    return *this;
}

Registry& Registry::add_alias(std::string alias, std::string canonical) {
    if (!index_.count(canonical)) {
        throw Error(ErrorKind::NotFound, "alias target '" + canonical + "' is not registered", canonical);
    }
    if (index_.count(alias)) {
        throw Error(ErrorKind::DuplicateName, "alias '" + alias + "' shadows a registered tool", alias);
    }
    aliases_[std::move(alias)] = std::move(canonical);
    return *this;
}

const ToolBinding* Registry::find(std::string_view name) const {
    const std::string n = text::trim(name);
    if (auto it = index_.find(n); it != index_.end()) return &bindings_[it->second];
    if (auto it = aliases_.find(n); it != aliases_.end()) return &bindings_[index_.find(it->second)->second];
    for (const auto& b : bindings_) {
        if (text::iequals(b.descriptor.name, n)) return &b;
    }
    for (const auto& [alias, canonical] : aliases_) {
        if (text::iequals(alias, n)) return &bindings_[index_.find(canonical)->second];
    }
    return nullptr;
}

std::optional<std::string> Registry::canonical_name(std::string_view name) const {
    if (const auto* b = find(name)) return b->descriptor.name;
    return std::nullopt;
}

std::vector<std::string> Registry::suggestions(std::string_view name) const {
    const std::string needle = text::to_lower(text::trim(name));
    // (distance, registration order) -> canonical name
    std::map<std::pair<std::size_t, std::size_t>, std::string> ranked;
    auto consider = [&](const std::string& spelling, const std::string& canonical) {
        const auto d = text::levenshtein(needle, text::to_lower(spelling));
        if (d > 3) return;
        const auto order = index_.find(canonical)->second;
        for (auto it = ranked.begin(); it != ranked.end(); ++it) {
            if (it->second == canonical) {
                if (it->first.first <= d) return;
                ranked.erase(it);
                break;
            }
        }
        ranked.emplace(std::make_pair(d, order), canonical);
    };
    for (const auto& b : bindings_) consider(b.descriptor.name, b.descriptor.name);
    for (const auto& [alias, canonical] : aliases_) consider(alias, canonical);
    std::vector<std::string> out;
    for (auto& [_, n] : ranked) out.push_back(n);
    return out;
}

const ToolBinding& Registry::resolve(std::string_view name) const {
    if (const auto* b = find(name)) return *b;
    auto sugg = suggestions(name);
    std::string msg = "no tool named '" + std::string(name) + "'";
    if (!sugg.empty()) msg += "; did you mean: " + text::join(sugg, ", ");
    throw Error(ErrorKind::NotFound, msg, std::string(name), std::move(sugg));
}

ToolOutput Registry::invoke(std::string_view name, const ToolRequest& request, const InvokeOptions& options) const {
    const ToolBinding& binding = resolve(name);
    const auto& tool = binding.descriptor.name;
    if (binding.material_required && request.materials.empty()) {
        throw Error(ErrorKind::MaterialMissing, "tool '" + tool + "' needs material input", tool);
    }
    if (options.verify_materials) {
        for (const auto& m : request.materials) {
            const bool pooled = options.material_pool && options.material_pool->count(m);
            std::error_code ec;
            if (!pooled && !fs::exists(m, ec)) {
                throw Error(ErrorKind::MaterialMissing, "material '" + m + "' for tool '" + tool + "' does not exist",
                            m);
            }
        }
    }
    if (binding.media != MediaKind::Any) {
        for (const auto& m : request.materials) {
            const auto kind = media_of(m);
            const bool ok = kind == MediaKind::Any || kind == binding.media ||
                            (binding.media == MediaKind::ImageOrVideo && kind != MediaKind::Any);
            if (!ok) {
                const std::string want = binding.media == MediaKind::Image ? "image" : "video";
                throw Error(ErrorKind::MaterialMismatch,
                            "tool '" + tool + "' expects " + want + " input but got '" + m + "'", m);
            }
        }
    }
    try {
        return binding.backend->run(binding.descriptor, request);
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::FixtureMiss || e.kind() == ErrorKind::BackendFailure ||
            e.kind() == ErrorKind::MaterialMissing || e.kind() == ErrorKind::FileMissing) {
            throw;
        }
        throw Error(ErrorKind::BackendFailure, "tool '" + tool + "' failed: " + e.what(), tool);
    }
}

std::string render_descriptions(const Registry& registry) {
    std::string out;
    std::size_t i = 0;
    for (const auto& b : registry.bindings()) {
        const auto& d = b.descriptor;
        if (i) out += "\n\n";
        ++i;
        out += "=== Tool Description for TOOL" + std::to_string(i) + " ===\n\n";
        out += "Name: " + d.name + "\n\n";
        out += "Ability: " + d.ability + "\n\n";
        out += "Query Input: " + d.query_input + "\n\n";
        out += "material Input: " + d.material_input + "\n\n";
        out += "Output: " + d.output + "\n\n";
        out += "Remark: " + d.remark;
    }
    return out;
}

}  // namespace pitchside::toolbox
