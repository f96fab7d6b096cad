#pragma once

#include <string>
#include <string_view>
#include <vector>

// Structured-instruction grammar exchanged between the execution agent and the
// runtime. Markers are case-sensitive:
//
//   <Call> | <EndCall>
//   <Purpose>...</Purpose>
//   <Query>...</Query>
//   <Material>None | path | ["a", "b"]</Material>
//   <Tool>...</Tool>
//   </Call> | </EndCall>
//
//   <StepResult>
//   <Answer>...</Answer>
//   </StepResult>
//
// Element content is taken verbatim up to the first matching close tag; there
// is no escaping. Rendering uses a fixed element order, parsing accepts any.
namespace pitchside::protocol {

struct ToolCall {
    std::string purpose;
    std::string query;
    std::vector<std::string> materials;
    std::string tool_name;
    bool terminal = false;

    friend bool operator==(const ToolCall&, const ToolCall&) = default;
};

struct StepResult {
    std::string answer;

    friend bool operator==(const StepResult&, const StepResult&) = default;
};

struct PlanParse {
    std::vector<std::string> known_info;
    std::vector<std::string> chain;

    friend bool operator==(const PlanParse&, const PlanParse&) = default;
};

// True when `call` can be rendered and parsed back unchanged: non-empty trimmed
// tool name, no empty or quote-carrying material paths, no marker text inside fields.
bool is_valid(const ToolCall& call);

std::string render_call(const ToolCall& call);
ToolCall parse_call(std::string_view text);

std::string render_step_result(const StepResult& result);
StepResult parse_step_result(std::string_view text);

PlanParse parse_plan(std::string_view text);

// Canonical <Material> payload and its inverse. Accepts `None`, one bare path,
// or a bracketed comma-separated list with optional single/double quotes.
std::string render_materials(const std::vector<std::string>& materials);
std::vector<std::string> parse_materials(std::string_view payload);

// "[*A* -> *B*]" and "{$X$, $Y$}" surface forms used in prompts.
std::string render_chain(const std::vector<std::string>& chain);
std::string render_known_info(const std::vector<std::string>& known_info);

}  // namespace pitchside::protocol
