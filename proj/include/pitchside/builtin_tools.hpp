#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "pitchside/knowledge_base.hpp"
#include "pitchside/model_gateway.hpp"
#include "pitchside/toolbox.hpp"

namespace pitchside::builtin {

struct BuiltinDeps {
    std::shared_ptr<gateway::Gateway> gateway;
    std::shared_ptr<const kb::Corpus> corpus;  // empty corpus when null
    std::shared_ptr<const toolbox::FixtureTable> fixtures;  // empty table when null
    // Stub tools named here run live through their adapter instead of fixtures.
    std::vector<toolbox::AdapterConfig> adapters;
};

// Variant spellings of tool names mapped onto registered names.
const std::vector<std::pair<std::string, std::string>>& alias_table();

// The 18 built-in tools with their backends, plus the alias table.
std::shared_ptr<toolbox::Registry> make_registry(const BuiltinDeps& deps);

}  // namespace pitchside::builtin
