#pragma once

#include <map>
#include <string>
#include <string_view>

// Prompt templates. Placeholders are `{name}`; fill() substitutes only the
// names it is given, in a single left-to-right pass, so braces elsewhere in a
// template (or in substituted values) are left alone.
namespace pitchside::prompts {

std::string fill(std::string_view tmpl, const std::map<std::string, std::string>& values);

// Planner: {toolbox_descriptions}, {tasks}.
extern const std::string_view kPlanning;
// Appended after kPlanning: {question}, {material}.
extern const std::string_view kPlanningQuery;
// Sent after a plan that failed to parse or validate: {error}.
extern const std::string_view kPlanRepair;

// Executor: {query}, {material}, {known_info}, {tool_chain}, {toolbox}.
extern const std::string_view kExecution;
// Appended after a malformed instruction: {error}.
extern const std::string_view kStepRepair;

// Game Search, part 1 (field extraction) and part 2 (candidate selection).
extern const std::string_view kGameSearchExtract;
extern const std::string_view kGameSearchExtractQuestion;  // {question}
extern const std::string_view kGameSearchSelect;           // {question}, {info}, {candidates}

extern const std::string_view kEntitySearch;
extern const std::string_view kEntitySearchQuestion;  // {question}

extern const std::string_view kMatchHistory;  // {query}, {match_history}
extern const std::string_view kGameInfo;      // {query}, {match_info}
extern const std::string_view kTextualRetrieval;  // {query}, {page}

extern const std::string_view kChoiceSelection;  // {question}, {options}, {process}

// Image-understanding tool prompts forwarded to stub adapters.
extern const std::string_view kCameraDetection;
extern const std::string_view kJerseyNumber;
extern const std::string_view kScoreTime;

// Curation.
extern const std::string_view kQaGeneration;  // {task}, {context}
extern const std::string_view kConfuser;      // {question}, {answer}

// Re-prompt suffix for tuple / field extraction: {error}.
extern const std::string_view kFormatRepair;

}  // namespace pitchside::prompts
