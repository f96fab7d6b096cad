#include "pitchside/error.hpp"

namespace pitchside {

std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::MissingBlock: return "MissingBlock";
        case ErrorKind::MissingField: return "MissingField";
        case ErrorKind::AmbiguousBlock: return "AmbiguousBlock";
        case ErrorKind::NestedTag: return "NestedTag";
        case ErrorKind::NoChainLine: return "NoChainLine";
        case ErrorKind::EmptyChain: return "EmptyChain";
        case ErrorKind::DuplicateName: return "DuplicateName";
        case ErrorKind::NotFound: return "NotFound";
        case ErrorKind::MaterialMissing: return "MaterialMissing";
        case ErrorKind::MaterialMismatch: return "MaterialMismatch";
        case ErrorKind::BackendFailure: return "BackendFailure";
        case ErrorKind::FixtureMiss: return "FixtureMiss";
        case ErrorKind::UnknownTool: return "UnknownTool";
        case ErrorKind::PlanFailed: return "PlanFailed";
        case ErrorKind::StepParseFailed: return "StepParseFailed";
        case ErrorKind::MaxStepsExceeded: return "MaxStepsExceeded";
        case ErrorKind::EmptyQuestion: return "EmptyQuestion";
        case ErrorKind::ParseError: return "ParseError";
        case ErrorKind::FileMissing: return "FileMissing";
        case ErrorKind::ExtractionMalformed: return "ExtractionMalformed";
        case ErrorKind::TupleMalformed: return "TupleMalformed";
        case ErrorKind::Timeout: return "Timeout";
        case ErrorKind::TransportError: return "TransportError";
        case ErrorKind::RateLimited: return "RateLimited";
        case ErrorKind::CacheMiss: return "CacheMiss";
        case ErrorKind::StorageError: return "StorageError";
        case ErrorKind::InvalidRequest: return "InvalidRequest";
        case ErrorKind::SchemaError: return "SchemaError";
        case ErrorKind::Unmapped: return "Unmapped";
        case ErrorKind::MissingTask: return "MissingTask";
        case ErrorKind::NoTemplate: return "NoTemplate";
        case ErrorKind::GenerationRejected: return "GenerationRejected";
        case ErrorKind::PoolTooSmall: return "PoolTooSmall";
        case ErrorKind::ConfuserRejected: return "ConfuserRejected";
        case ErrorKind::ConfigError: return "ConfigError";
    }
    return "Unknown";
}

Error::Error(ErrorKind kind, std::string message, std::string detail,
             std::vector<std::string> suggestions)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message),
      kind_(kind),
      detail_(std::move(detail)),
      suggestions_(std::move(suggestions)) {}

}  // namespace pitchside
