#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace pitchside::toolbox {

// Six-field declarative tool contract.
struct ToolDescriptor {
    std::string name;
    std::string ability;
    std::string query_input;
    std::string material_input;
    std::string output;
    std::string remark;

    friend bool operator==(const ToolDescriptor&, const ToolDescriptor&) = default;
};

struct ToolRequest {
    std::string query;
    std::vector<std::string> materials;
};

struct ToolOutput {
    std::string text;
    std::vector<std::string> produced_files;

    friend bool operator==(const ToolOutput&, const ToolOutput&) = default;
};

enum class BackendKind { Prompted, Retrieval, Stub };

// Accepted media for material paths, judged by file extension. Paths with an
// unrecognised extension always pass.
enum class MediaKind { Any, Image, Video, ImageOrVideo };

class ToolBackend {
public:
    virtual ~ToolBackend() = default;
    virtual ToolOutput run(const ToolDescriptor& descriptor, const ToolRequest& request) const = 0;
};

// --- fixtures for stub tools -----------------------------------------------

struct FixtureRecord {
    std::string tool;
    std::string query_pattern;
    std::string materials_pattern;  // substring any material must contain; empty matches all
    std::string output_text;
    std::vector<std::string> produced_files;
};

// Lookup order per tool: exact query match, then the first record whose
// query_pattern is a substring of the query. Either way materials_pattern must match.
class FixtureTable {
public:
    FixtureTable() = default;
    explicit FixtureTable(std::vector<FixtureRecord> records);

    // JSON array of FixtureRecord objects.
    static std::shared_ptr<FixtureTable> load(const std::string& path);

    void add(FixtureRecord record);
    std::optional<ToolOutput> lookup(std::string_view tool, const ToolRequest& request) const;
    const std::vector<FixtureRecord>& records() const noexcept { return records_; }

private:
    std::vector<FixtureRecord> records_;
};

struct AdapterConfig {
    enum class Mode { Command, Endpoint };
    std::string tool;
    Mode mode = Mode::Command;
    std::string target;
};

// JSON array of {tool, mode: "command"|"endpoint", target}.
std::vector<AdapterConfig> load_adapters(const std::string& path);

// Stub for an external model-backed tool. In fixture mode it answers from the
// fixture table; in live mode it forwards {tool, prompt, query, materials} as
// JSON to a command's stdin or an HTTP endpoint and expects {text, produced_files}
// (or plain text) back.
class StubBackend final : public ToolBackend {
public:
    StubBackend(std::string prompt, std::shared_ptr<const FixtureTable> fixtures,
                std::optional<AdapterConfig> adapter = std::nullopt);

    ToolOutput run(const ToolDescriptor& descriptor, const ToolRequest& request) const override;

    const std::string& prompt() const noexcept { return prompt_; }
    bool live() const noexcept { return adapter_.has_value(); }

private:
    ToolOutput run_command(const std::string& payload) const;
    ToolOutput run_endpoint(const std::string& payload) const;

    std::string prompt_;
    std::shared_ptr<const FixtureTable> fixtures_;
    std::optional<AdapterConfig> adapter_;
};

// --- registry ---------------------------------------------------------------

struct ToolBinding {
    ToolDescriptor descriptor;
    BackendKind kind = BackendKind::Prompted;
    std::shared_ptr<const ToolBackend> backend;
    bool material_required = false;
    MediaKind media = MediaKind::Any;
    // Stub bindings declare the fixture table used in deterministic mode.
    std::shared_ptr<const FixtureTable> fixtures;
};

struct InvokeOptions {
    bool verify_materials = true;
    // Paths treated as present even if absent on disk (e.g. files produced by earlier steps).
    const std::set<std::string>* material_pool = nullptr;
};

MediaKind media_of(std::string_view path);

// Built once, then shared read-only: resolve/invoke never mutate.
class Registry {
public:
    // Throws DuplicateName, or InvalidRequest for an incomplete binding.
    Registry& add(ToolBinding binding);
    // Maps a variant spelling onto a registered canonical name.
    Registry& add_alias(std::string alias, std::string canonical);

    // Exact name, alias, then case-insensitive match; throws NotFound carrying
    // suggestions within edit distance 3.
    const ToolBinding& resolve(std::string_view name) const;
    std::optional<std::string> canonical_name(std::string_view name) const;
    std::vector<std::string> suggestions(std::string_view name) const;

    ToolOutput invoke(std::string_view name, const ToolRequest& request, const InvokeOptions& options = {}) const;

    std::size_t size() const noexcept { return bindings_.size(); }
    bool empty() const noexcept { return bindings_.empty(); }
    const std::vector<ToolBinding>& bindings() const noexcept { return bindings_; }
    const std::map<std::string, std::string>& aliases() const noexcept { return aliases_; }

private:
    const ToolBinding* find(std::string_view name) const;

    std::vector<ToolBinding> bindings_;
    std::map<std::string, std::size_t, std::less<>> index_;
    std::map<std::string, std::string> aliases_;
};

// "=== Tool Description for TOOLn ===" blocks in registration order.
std::string render_descriptions(const Registry& registry);

}  // namespace pitchside::toolbox
