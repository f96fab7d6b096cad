#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace pitchside {

enum class ErrorKind {
    // protocol
    MissingBlock,
    MissingField,
    AmbiguousBlock,
    NestedTag,
    NoChainLine,
    EmptyChain,
    // toolbox
    DuplicateName,
    NotFound,
    MaterialMissing,
    MaterialMismatch,
    BackendFailure,
    FixtureMiss,
    // planner / executor
    UnknownTool,
    PlanFailed,
    StepParseFailed,
    MaxStepsExceeded,
    EmptyQuestion,
    // knowledge base
    ParseError,
    FileMissing,
    ExtractionMalformed,
    TupleMalformed,
    // gateway
    Timeout,
    TransportError,
    RateLimited,
    CacheMiss,
    StorageError,
    InvalidRequest,
    // harness / curation
    SchemaError,
    Unmapped,
    MissingTask,
    NoTemplate,
    GenerationRejected,
    PoolTooSmall,
    ConfuserRejected,
    ConfigError,
};

std::string_view to_string(ErrorKind kind) noexcept;

// Single exception type for the runtime; `kind` selects the failure class and
// `detail` carries the offending span or item (used for re-prompting).
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, std::string message, std::string detail = {},
          std::vector<std::string> suggestions = {});

    ErrorKind kind() const noexcept { return kind_; }
    const std::string& detail() const noexcept { return detail_; }
    const std::vector<std::string>& suggestions() const noexcept { return suggestions_; }

private:
    ErrorKind kind_;
    std::string detail_;
    std::vector<std::string> suggestions_;
};

}  // namespace pitchside
