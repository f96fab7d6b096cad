#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pitchside/model_gateway.hpp"
#include "pitchside/toolbox.hpp"

namespace pitchside::planner {

struct TaskCatalogEntry {
    int index = 0;
    std::string title;
    std::string description;
    // Raw chain spellings as written in the catalog, e.g. "Camera Detection (twice)".
    std::vector<std::string> recommended_chain;

    friend bool operator==(const TaskCatalogEntry&, const TaskCatalogEntry&) = default;
};

// Catalog text format:
//
//   Task1: ****Title**** description ...
//
//   Recommended chain: A -> B -> C
//
// Blocks are separated by blank lines; render_catalog(parse_catalog(t)) == t
// for text in this canonical form.
std::string render_catalog(const std::vector<TaskCatalogEntry>& catalog);
std::vector<TaskCatalogEntry> parse_catalog(std::string_view text);
std::vector<TaskCatalogEntry> load_catalog(const std::string& path);

// "Camera Detection (twice)" -> {"Camera Detection", 2}; "X (five times)" -> {"X", 5}.
std::pair<std::string, int> split_repetition(std::string_view name);

// Role-labelled material manifest: `"video": {"a.mp4"}, "image": {"b.png"}`, or `None`.
std::string material_manifest(const std::vector<std::string>& materials);

struct ValidatedChain {
    std::vector<std::string> chain;  // canonical names, multiplicity preserved
    std::vector<std::string> warnings;
};

// Resolves every name (expanding repetition annotations). Throws EmptyChain or
// UnknownTool (with suggestions). Material compatibility problems are warnings.
ValidatedChain validate_chain(const std::vector<std::string>& chain, const toolbox::Registry& registry,
                              const std::vector<std::string>& question_materials = {});

struct PlanResult {
    std::vector<std::string> known_info;
    std::vector<std::string> chain;
    std::string raw_response;                // the accepted response
    std::vector<std::string> raw_responses;  // every attempt, in order
    std::vector<std::string> warnings;
    int attempts = 0;
};

std::string build_planning_prompt(std::string_view question, const std::vector<std::string>& materials,
                                  const toolbox::Registry& registry,
                                  const std::vector<TaskCatalogEntry>& catalog);

struct PlannerConfig {
    int max_plan_retries = 2;
};

class Planner {
public:
    Planner(std::shared_ptr<gateway::Gateway> gateway, std::shared_ptr<const toolbox::Registry> registry,
            std::vector<TaskCatalogEntry> catalog, PlannerConfig config = {});

    // Throws PlanFailed once retries are exhausted; its detail holds every raw response.
    PlanResult plan(std::string_view question, const std::vector<std::string>& materials) const;

    const toolbox::Registry& registry() const noexcept { return *registry_; }
    const std::vector<TaskCatalogEntry>& catalog() const noexcept { return catalog_; }

private:
    std::shared_ptr<gateway::Gateway> gateway_;
    std::shared_ptr<const toolbox::Registry> registry_;
    std::vector<TaskCatalogEntry> catalog_;
    PlannerConfig config_;
};

}  // namespace pitchside::planner
