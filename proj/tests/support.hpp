#pragma once

#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "pitchside/builtin_data.hpp"
#include "pitchside/builtin_tools.hpp"
#include "pitchside/executor.hpp"
#include "pitchside/knowledge_base.hpp"
#include "pitchside/model_gateway.hpp"
#include "pitchside/planner.hpp"

// Tests run with the fixture directory as working directory, so fixture
// paths are relative and traces carry the same paths on every machine.
namespace support {

namespace ps = pitchside;

inline std::shared_ptr<const ps::kb::Corpus> fixture_corpus() {
    return std::make_shared<const ps::kb::Corpus>(ps::kb::Corpus::ingest("corpus/entities", "corpus/matches.tsv"));
}

struct Stack {
    std::shared_ptr<ps::gateway::Gateway> gateway;
    std::shared_ptr<ps::toolbox::Registry> registry;
    std::shared_ptr<ps::planner::Planner> planner;
    std::shared_ptr<ps::executor::Executor> executor;
    std::shared_ptr<ps::executor::Agent> agent;
};

inline Stack make_stack(std::shared_ptr<ps::gateway::Gateway> gateway) {
    Stack s;
    s.gateway = gateway;
    ps::builtin::BuiltinDeps deps;
    deps.gateway = gateway;
    deps.corpus = fixture_corpus();
    deps.fixtures = ps::toolbox::FixtureTable::load("tool_fixtures.json");
    s.registry = ps::builtin::make_registry(deps);
    s.planner = std::make_shared<ps::planner::Planner>(gateway, s.registry, ps::builtin::task_catalog());
    s.executor = std::make_shared<ps::executor::Executor>(gateway, s.registry);
    s.agent = std::make_shared<ps::executor::Agent>(s.planner, s.executor);
    return s;
}

inline std::string scratch_dir(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / ("pitchside-test-" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir.string();
}

}  // namespace support
