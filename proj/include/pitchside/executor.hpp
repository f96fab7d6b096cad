#pragma once

#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "pitchside/model_gateway.hpp"
#include "pitchside/planner.hpp"
#include "pitchside/protocol.hpp"
#include "pitchside/toolbox.hpp"

namespace pitchside::executor {

// One executed step: the tool, the instruction that selected it and its output.
// `failed` marks steps whose tool could not be resolved or invoked; their
// output text is the error shown back to the model.
struct HistoryEntry {
    int step_index = 0;
    std::string tool_name;
    protocol::ToolCall instruction;
    toolbox::ToolOutput output;
    bool failed = false;
};

enum class RunStatus { Completed, Aborted };

struct ExecutionTrace {
    std::string question;
    std::vector<std::string> materials;
    planner::PlanResult plan;
    std::vector<HistoryEntry> steps;
    std::string final_answer;
    RunStatus status = RunStatus::Aborted;
    std::string abort_reason;

    bool completed() const noexcept { return status == RunStatus::Completed; }
};

// Text fed back to the model for a step's output; produced files not already
// mentioned in the text are listed after it.
std::string step_result_text(const toolbox::ToolOutput& output);

// Rendered Call/StepResult pairs, in order.
std::string render_transcript(const std::vector<HistoryEntry>& history);

std::string build_execution_prompt(std::string_view question, const std::vector<std::string>& materials,
                                   const planner::PlanResult& plan, const toolbox::Registry& registry,
                                   const std::vector<HistoryEntry>& history);

// Plan, transcript and final answer as one readable block (used for answer mapping).
std::string render_process(const ExecutionTrace& trace);

nlohmann::json trace_to_json(const ExecutionTrace& trace);
std::string serialize_trace(const ExecutionTrace& trace);

struct ExecutorConfig {
    int min_steps_floor = 6;
    int step_repair_budget = 1;
    bool verify_materials = true;
};

struct RunState {
    std::string question;
    std::vector<std::string> materials;
    planner::PlanResult plan;
    std::vector<HistoryEntry> steps;
    std::set<std::string> material_pool;
};

struct FinalAnswer {
    std::string text;
};

class Executor {
public:
    Executor(std::shared_ptr<gateway::Gateway> gateway, std::shared_ptr<const toolbox::Registry> registry,
             ExecutorConfig config = {});

    static RunState start(std::string question, std::vector<std::string> materials, planner::PlanResult plan);

    // One model turn plus one tool dispatch. Appends to state.steps and returns
    // either that entry or the final answer. Throws StepParseFailed when the
    // model output stays malformed past the repair budget.
    std::variant<HistoryEntry, FinalAnswer> step(RunState& state) const;

    // Never throws on model or tool failure; those end in an aborted trace.
    ExecutionTrace run(std::string_view question, const std::vector<std::string>& materials,
                       const planner::PlanResult& plan) const;

    int step_limit(const planner::PlanResult& plan) const;

private:
    std::shared_ptr<gateway::Gateway> gateway_;
    std::shared_ptr<const toolbox::Registry> registry_;
    ExecutorConfig config_;
};

// Plan-then-execute pipeline. Questions are answered open-ended; options are never shown.
class Agent {
public:
    Agent(std::shared_ptr<const planner::Planner> planner, std::shared_ptr<const Executor> executor);

    std::pair<std::string, ExecutionTrace> answer(std::string_view question,
                                                  const std::vector<std::string>& materials) const;

private:
    std::shared_ptr<const planner::Planner> planner_;
    std::shared_ptr<const Executor> executor_;
};

}  // namespace pitchside::executor
