#pragma once

#include <vector>

#include "pitchside/planner.hpp"
#include "pitchside/toolbox.hpp"

namespace pitchside::builtin {

// The 18 built-in tool descriptors, in registration order (TOOL1..TOOL18).
const std::vector<toolbox::ToolDescriptor>& tool_descriptors();

// The 14-entry task catalog with recommended chains as written.
const std::vector<planner::TaskCatalogEntry>& task_catalog();

}  // namespace pitchside::builtin
