#include "pitchside/executor.hpp"

#include <algorithm>

#include "pitchside/error.hpp"
#include "pitchside/prompts.hpp"
#include "pitchside/text.hpp"

namespace pitchside::executor {

using nlohmann::json;

std::string step_result_text(const toolbox::ToolOutput& output) {
    std::vector<std::string> unmentioned;
    for (const auto& f : output.produced_files) {
        if (!text::contains(output.text, f)) unmentioned.push_back(f);
    }
    if (unmentioned.empty()) return output.text;
    return output.text + "\nProduced files: " + protocol::render_materials(unmentioned);
}

std::string render_transcript(const std::vector<HistoryEntry>& history) {
    std::string out;
    for (std::size_t i = 0; i < history.size(); ++i) {
        if (i) out += "\n\n";
        out += protocol::render_call(history[i].instruction);
        out += "\n\n";
        out += protocol::render_step_result({step_result_text(history[i].output)});
    }
    return out;
}

std::string build_execution_prompt(std::string_view question, const std::vector<std::string>& materials,
                                   const planner::PlanResult& plan, const toolbox::Registry& registry,
                                   const std::vector<HistoryEntry>& history) {
    std::string prompt = prompts::fill(prompts::kExecution,
                                       {{"query", std::string(question)},
                                        {"material", planner::material_manifest(materials)},
                                        {"known_info", protocol::render_known_info(plan.known_info)},
                                        {"tool_chain", protocol::render_chain(plan.chain)},
                                        {"toolbox", toolbox::render_descriptions(registry)}});
    if (!history.empty()) prompt += "\n\n" + render_transcript(history);
    return prompt;
}

std::string render_process(const ExecutionTrace& trace) {
    std::string out = "Question: " + trace.question + "\n";
    out += "Known Info: " + protocol::render_known_info(trace.plan.known_info) + "\n";
    out += "Tool Chain: " + protocol::render_chain(trace.plan.chain) + "\n";
    if (!trace.steps.empty()) out += "\n" + render_transcript(trace.steps) + "\n";
    out += "\nFinal answer: " + (trace.completed() ? trace.final_answer : "(none: " + trace.abort_reason + ")");
    return out;
}

json trace_to_json(const ExecutionTrace& trace) {
    json steps = json::array();
    for (const auto& s : trace.steps) {
        steps.push_back({{"index", s.step_index},
                         {"tool", s.tool_name},
                         {"failed", s.failed},
                         {"call", protocol::render_call(s.instruction)},
                         {"result", protocol::render_step_result({step_result_text(s.output)})},
                         {"produced_files", s.output.produced_files}});
    }
    return {{"question", trace.question},
            {"materials", trace.materials},
            {"plan",
             {{"known_info", trace.plan.known_info},
              {"chain", trace.plan.chain},
              {"raw_response", trace.plan.raw_response},
              {"raw_responses", trace.plan.raw_responses},
              {"warnings", trace.plan.warnings},
              {"attempts", trace.plan.attempts}}},
            {"steps", steps},
            {"final_answer", trace.final_answer},
            {"status", trace.completed() ? "completed" : "aborted"},
            {"abort_reason", trace.abort_reason}};
}

std::string serialize_trace(const ExecutionTrace& trace) { return trace_to_json(trace).dump(2) + "\n"; }

Executor::Executor(std::shared_ptr<gateway::Gateway> gateway, std::shared_ptr<const toolbox::Registry> registry,
                   ExecutorConfig config)
    : gateway_(std::move(gateway)), registry_(std::move(registry)), config_(config) {}

RunState Executor::start(std::string question, std::vector<std::string> materials, planner::PlanResult plan) {
    RunState state{std::move(question), std::move(materials), std::move(plan), {}, {}};
    state.material_pool.insert(state.materials.begin(), state.materials.end());
    return state;
}

int Executor::step_limit(const planner::PlanResult& plan) const {
    return std::max(2 * static_cast<int>(plan.chain.size()), config_.min_steps_floor);
}

std::variant<HistoryEntry, FinalAnswer> Executor::step(RunState& state) const {
    const std::string prompt =
        build_execution_prompt(state.question, state.materials, state.plan, *registry_, state.steps);
    auto request = gateway::ChatRequest::user(prompt, "executor", state.materials);

    protocol::ToolCall call;
    for (int attempt = 0;; ++attempt) {
        const std::string raw = gateway_->complete(request).text;
        try {
            call = protocol::parse_call(raw);
            break;
        } catch (const Error& e) {
            if (attempt >= config_.step_repair_budget) {
                throw Error(ErrorKind::StepParseFailed,
                            "step " + std::to_string(state.steps.size() + 1) + ": " + e.what(), e.detail());
            }
            request.messages.resize(1);
            request.messages.push_back({gateway::Role::Assistant, raw});
            request.messages.push_back(
                {gateway::Role::User, prompts::fill(prompts::kStepRepair, {{"error", e.what()}})});
        }
    }

    HistoryEntry entry;
    entry.step_index = static_cast<int>(state.steps.size()) + 1;
    entry.instruction = call;
    entry.tool_name = call.tool_name;
    try {
        const auto& binding = registry_->resolve(call.tool_name);
        entry.tool_name = binding.descriptor.name;
        toolbox::InvokeOptions options;
        options.verify_materials = config_.verify_materials;
        options.material_pool = &state.material_pool;
        entry.output = registry_->invoke(binding.descriptor.name, {call.query, call.materials}, options);
    } catch (const Error& e) {
        // Shown to the model as the step result so it can pick another tool.
        entry.failed = true;
        entry.output = toolbox::ToolOutput{std::string("Error: ") + e.what(), {}};
    }
    state.material_pool.insert(entry.output.produced_files.begin(), entry.output.produced_files.end());
    state.steps.push_back(entry);
    if (call.terminal && !entry.failed) return FinalAnswer{entry.output.text};
    return entry;
}

ExecutionTrace Executor::run(std::string_view question, const std::vector<std::string>& materials,
                             const planner::PlanResult& plan) const {
    RunState state = start(std::string(question), materials, plan);
    ExecutionTrace trace;
    trace.question = state.question;
    trace.materials = materials;
    trace.plan = plan;

    const int limit = step_limit(plan);
    try {
        while (static_cast<int>(state.steps.size()) < limit) {
            auto outcome = step(state);
            if (auto* fin = std::get_if<FinalAnswer>(&outcome)) {
                trace.steps = std::move(state.steps);
                trace.final_answer = fin->text;
                trace.status = RunStatus::Completed;
                return trace;
            }
        }
        trace.abort_reason = std::string(to_string(ErrorKind::MaxStepsExceeded)) + ": no EndCall within " +
                             std::to_string(limit) + " steps";
    } catch (const Error& e) {
        trace.abort_reason = e.what();
    }
    trace.steps = std::move(state.steps);
    trace.status = RunStatus::Aborted;
    return trace;
}

Agent::Agent(std::shared_ptr<const planner::Planner> planner, std::shared_ptr<const Executor> executor)
    : planner_(std::move(planner)), executor_(std::move(executor)) {}

std::pair<std::string, ExecutionTrace> Agent::answer(std::string_view question,
                                                     const std::vector<std::string>& materials) const {
    ExecutionTrace aborted;
    aborted.question = std::string(question);
    aborted.materials = materials;
    aborted.status = RunStatus::Aborted;
    if (text::trim(question).empty()) {
        aborted.abort_reason = std::string(to_string(ErrorKind::EmptyQuestion)) + ": question is empty";
        return {"", aborted};
    }
    planner::PlanResult plan;
    try {
        plan = planner_->plan(question, materials);
    } catch (const Error& e) {
        aborted.abort_reason = e.what();
        if (e.kind() == ErrorKind::PlanFailed) aborted.plan.raw_responses = text::split(e.detail(), "\n---\n");
        return {"", aborted};
    }
    auto trace = executor_->run(question, materials, plan);
    auto answer = trace.final_answer;
    return {std::move(answer), std::move(trace)};
}

}  // namespace pitchside::executor
