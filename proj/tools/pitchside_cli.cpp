#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "pitchside/bench_harness.hpp"
#include "pitchside/builtin_data.hpp"
#include "pitchside/builtin_tools.hpp"
#include "pitchside/curation.hpp"
#include "pitchside/error.hpp"
#include "pitchside/executor.hpp"
#include "pitchside/knowledge_base.hpp"
#include "pitchside/model_gateway.hpp"
#include "pitchside/planner.hpp"
#include "pitchside/protocol.hpp"
#include "pitchside/text.hpp"

#ifndef PITCHSIDE_DATA_DIR
#define PITCHSIDE_DATA_DIR "data"
#endif

namespace fs = std::filesystem;
using namespace pitchside;
using nlohmann::json;

namespace {

// Flag value if given, else PITCHSIDE_<KEY> from the environment, else the
// config file entry, else the default.
class Settings {
public:
    void load_config(const std::string& path) {
        if (path.empty()) return;
        try {
            config_ = json::parse(text::read_file(path));
        } catch (const json::exception& e) {
            throw Error(ErrorKind::ConfigError, path + ": " + e.what(), path);
        }
        if (!config_.is_object()) throw Error(ErrorKind::ConfigError, path + ": config must be an object", path);
    }

    std::string get(const std::string& key, const std::optional<std::string>& flag, std::string fallback = {}) const {
        if (flag) return *flag;
        std::string env_name = "PITCHSIDE_";
        for (char c : key) env_name += c == '-' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
        if (const char* env = std::getenv(env_name.c_str()); env && *env) return env;
        if (config_.contains(key)) {
            const auto& v = config_[key];
            return v.is_string() ? v.get<std::string>() : v.dump();
        }
        return fallback;
    }

    long get_positive(const std::string& key, const std::optional<std::string>& flag, long fallback) const {
        const auto raw = get(key, flag, std::to_string(fallback));
        long v = 0;
        try {
            std::size_t used = 0;
            v = std::stol(raw, &used);
            if (used != raw.size()) throw std::invalid_argument(raw);
        } catch (const std::exception&) {
            throw Error(ErrorKind::ConfigError, key + " must be an integer, got '" + raw + "'", key);
        }
        if (v <= 0) throw Error(ErrorKind::ConfigError, key + " must be positive", key);
        return v;
    }

private:
    json config_ = json::object();
};

struct Flags {
    std::optional<std::string> config, gateway, catalog, entities, matches, fixtures, adapters, trace_dir, concurrency,
        seed, max_plan_retries, min_steps;
};

void add_run_flags(CLI::App& app, Flags& f) {
    app.add_option("--config", f.config, "JSON config file");
    app.add_option("--gateway", f.gateway, "remote | scripted:PATH | replay:DIR | record:DIR");
    app.add_option("--catalog", f.catalog, "task catalog file (defaults to the built-in catalog)");
    app.add_option("--entities", f.entities, "entity page directory");
    app.add_option("--matches", f.matches, "match index (tab-separated)");
    app.add_option("--fixtures", f.fixtures, "stub tool fixture table (JSON)");
    app.add_option("--adapters", f.adapters, "stub tool adapter config (JSON)");
    app.add_option("--trace-dir", f.trace_dir, "directory for trace files");
    app.add_option("--concurrency", f.concurrency, "evaluation width");
    app.add_option("--seed", f.seed, "global seed");
    app.add_option("--max-plan-retries", f.max_plan_retries, "planner repair attempts");
    app.add_option("--min-steps", f.min_steps, "executor step-limit floor");
}

std::shared_ptr<gateway::Gateway> make_gateway(const std::string& mode) {
    if (mode.rfind("scripted:", 0) == 0) return gateway::ScriptedGateway::load(mode.substr(9));
    if (mode.rfind("replay:", 0) == 0) {
        return std::make_shared<gateway::ReplayGateway>(std::make_shared<gateway::ReplayCache>(mode.substr(7)));
    }
    const auto remote = [] {
        auto cfg = gateway::RemoteConfig::from_env();
        if (cfg.endpoint.empty()) throw Error(ErrorKind::ConfigError, "MODEL_ENDPOINT is not set", "MODEL_ENDPOINT");
        return std::make_shared<gateway::RemoteGateway>(cfg);
    };
    if (mode.rfind("record:", 0) == 0) {
        return std::make_shared<gateway::ReplayGateway>(std::make_shared<gateway::ReplayCache>(mode.substr(7)), remote());
    }
    if (mode == "remote") return remote();
    throw Error(ErrorKind::ConfigError, "unknown gateway mode '" + mode + "'", mode);
}

struct Runtime {
    std::shared_ptr<gateway::Gateway> gateway;
    std::shared_ptr<toolbox::Registry> registry;
    std::shared_ptr<planner::Planner> planner;
    std::shared_ptr<executor::Executor> executor;
    std::shared_ptr<executor::Agent> agent;
};

Runtime build_runtime(const Settings& s, const Flags& f, bool need_gateway = true) {
    Runtime rt;
    if (need_gateway) rt.gateway = make_gateway(s.get("gateway", f.gateway, "remote"));
    builtin::BuiltinDeps deps;
    deps.gateway = rt.gateway;
    const auto entities = s.get("entities", f.entities);
    const auto matches = s.get("matches", f.matches);
    if (!entities.empty() || !matches.empty()) {
        deps.corpus = std::make_shared<const kb::Corpus>(kb::Corpus::ingest(entities, matches));
    }
    if (const auto p = s.get("fixtures", f.fixtures); !p.empty()) deps.fixtures = toolbox::FixtureTable::load(p);
    if (const auto p = s.get("adapters", f.adapters); !p.empty()) deps.adapters = toolbox::load_adapters(p);
    rt.registry = builtin::make_registry(deps);

    const auto catalog_path = s.get("catalog", f.catalog);
    auto catalog = catalog_path.empty() ? builtin::task_catalog() : planner::load_catalog(catalog_path);
    planner::PlannerConfig pc;
    pc.max_plan_retries = static_cast<int>(s.get_positive("max-plan-retries", f.max_plan_retries, 2));
    executor::ExecutorConfig ec;
    ec.min_steps_floor = static_cast<int>(s.get_positive("min-steps", f.min_steps, 6));
    rt.planner = std::make_shared<planner::Planner>(rt.gateway, rt.registry, std::move(catalog), pc);
    rt.executor = std::make_shared<executor::Executor>(rt.gateway, rt.registry, ec);
    rt.agent = std::make_shared<executor::Agent>(rt.planner, rt.executor);
    return rt;
}

void write_output(const std::string& path, const std::string& contents) {
    const auto parent = fs::path(path).parent_path();
    if (!parent.empty()) fs::create_directories(parent);
    text::write_file_atomic(path, contents);
}

int cmd_ask(const Settings& s, const Flags& f, const std::string& question, const std::vector<std::string>& materials,
            bool plan_only, const std::string& trace_path) {
    for (const auto& m : materials) {
        if (!fs::exists(m)) {
            std::cerr << to_string(ErrorKind::MaterialMissing) << ": material '" << m << "' does not exist\n";
            return 2;
        }
    }
    auto rt = build_runtime(s, f);
    if (plan_only) {
        try {
            const auto plan = rt.planner->plan(question, materials);
            std::cout << "Known Info: " << protocol::render_known_info(plan.known_info) << "\n";
            std::cout << "Tool Chain: " << protocol::render_chain(plan.chain) << "\n";
            for (const auto& w : plan.warnings) std::cerr << "warning: " << w << "\n";
            return 0;
        } catch (const Error& e) {
            std::cerr << e.what() << "\n";
            return 2;
        }
    }
    const auto [answer, trace] = rt.agent->answer(question, materials);
    std::string out = trace_path;
    if (out.empty()) {
        if (const auto dir = s.get("trace-dir", f.trace_dir); !dir.empty()) out = (fs::path(dir) / "ask.json").string();
    }
    if (!out.empty()) write_output(out, executor::serialize_trace(trace));
    if (!trace.completed()) {
        std::cerr << "aborted: " << trace.abort_reason << "\n";
        return 2;
    }
    std::cout << answer << "\n";
    return 0;
}

int cmd_eval(const Settings& s, const Flags& f, const std::string& dataset, const std::string& tasks,
             const std::string& report_text, const std::string& report_json, const std::string& failures_path) {
    std::vector<harness::QAItem> items;
    try {
        items = harness::load_dataset(dataset);
    } catch (const Error& e) {
        std::cerr << e.what() << "\n";
        return 1;
    }
    if (!tasks.empty()) {
        std::vector<std::string> wanted;
        for (const auto& t : text::split(tasks, ",")) {
            const auto n = harness::task_number(t);
            if (!n) {
                std::cerr << to_string(ErrorKind::ConfigError) << ": unknown task '" << t << "'\n";
                return 1;
            }
            wanted.push_back(harness::task_label(*n));
        }
        std::erase_if(items, [&](const auto& item) {
            return std::find(wanted.begin(), wanted.end(), item.task) == wanted.end();
        });
        if (items.empty()) {
            std::cerr << to_string(ErrorKind::SchemaError) << ": no items left after the task filter\n";
            return 1;
        }
    }
    auto rt = build_runtime(s, f);
    harness::EvalOptions options;
    options.concurrency = static_cast<std::size_t>(s.get_positive("concurrency", f.concurrency, 1));
    options.trace_dir = s.get("trace-dir", f.trace_dir);
    auto agent = rt.agent;
    const harness::AnswerFn answer = [agent](std::string_view q, const std::vector<std::string>& m) {
        return agent->answer(q, m);
    };
    const auto report = harness::evaluate(items, answer, *rt.gateway, options);
    const auto human = harness::render_report(report, harness::ReportFormat::Text);
    std::cout << human;
    if (!report_text.empty()) write_output(report_text, human);
    if (!report_json.empty()) write_output(report_json, harness::render_report(report, harness::ReportFormat::Json));
    if (!failures_path.empty()) {
        std::string lines;
        for (const auto& fl : report.failures) lines += fl.id + "\t" + fl.reason + "\n";
        write_output(failures_path, lines);
    }
    return 0;
}

int cmd_ingest(const Settings& s, const Flags& f) {
    const auto corpus = kb::Corpus::ingest(s.get("entities", f.entities), s.get("matches", f.matches));
    std::map<std::string, int> kinds;
    for (const auto& e : corpus.entities()) ++kinds[std::string(kb::to_string(e.kind))];
    std::cout << "entities: " << corpus.stats().entities << "\n";
    for (const auto& [k, n] : kinds) std::cout << "  " << k << ": " << n << "\n";
    std::cout << "matches: " << corpus.stats().matches << "\n";
    return 0;
}

int cmd_tools(const Settings& s, const Flags& f) {
    auto rt = build_runtime(s, f, false);
    std::map<std::string, std::vector<std::string>> aliases;
    for (const auto& [alias, canonical] : rt.registry->aliases()) aliases[canonical].push_back(alias);
    std::size_t i = 0;
    for (const auto& b : rt.registry->bindings()) {
        const auto& name = b.descriptor.name;
        std::cout << "TOOL" << ++i << "\t" << name;
        if (aliases.count(name)) std::cout << "\t(aliases: " << text::join(aliases[name], ", ") << ")";
        std::cout << "\n";
    }
    return 0;
}

int cmd_curate(const Settings& s, const Flags& f, const std::string& annotations, const std::string& out,
               const std::string& templates, const std::string& pools_path, const std::string& strategy_name,
               const std::string& mode) {
    const auto records = curation::load_annotations(annotations);
    const auto seed = static_cast<std::uint64_t>(s.get_positive("seed", f.seed, 1));
    const auto pools = curation::load_label_pools(pools_path);
    curation::TemplateBank bank;
    if (mode == "template") bank = curation::load_templates(templates);
    curation::Strategy strategy;
    if (strategy_name == "category") {
        strategy = curation::Strategy::Category;
    } else if (strategy_name == "confuser") {
        strategy = curation::Strategy::Confuser;
    } else {
        throw Error(ErrorKind::ConfigError, "unknown strategy '" + strategy_name + "'", strategy_name);
    }
    std::shared_ptr<gateway::Gateway> gw;
    if (mode == "model" || strategy == curation::Strategy::Confuser) gw = make_gateway(s.get("gateway", f.gateway, "remote"));

    std::vector<harness::QAItem> items;
    int errors = 0;
    for (const auto& r : records) {
        try {
            curation::validate_record(r, pools);
            curation::OpenQA qa;
            if (mode == "template") {
                qa = curation::template_generate(bank, r, seed);
            } else {
                std::string context = r.payload.value("context", std::string());
                if (context.empty() && r.payload.contains("context_file")) {
                    context = text::read_file(r.payload["context_file"].get<std::string>());
                }
                qa = curation::model_generate(*gw, r, context);
            }
            const auto pool_it = pools.find(r.task);
            const std::vector<std::string> pool = pool_it == pools.end() ? std::vector<std::string>{} : pool_it->second;
            items.push_back(curation::to_multichoice(qa, pool, strategy, seed, gw.get()));
        } catch (const Error& e) {
            ++errors;
            std::cerr << r.id << ": " << e.what() << "\n";
        }
    }
    write_output(out, harness::render_dataset(items));
    std::cout << "generated: " << items.size() << "\nrejected: " << errors << "\n";
    return errors ? 1 : 0;
}

int cmd_validate(const std::string& dataset, const std::string& worksheet) {
    const auto items = harness::load_dataset(dataset);
    const auto report = curation::validate_dataset(items);
    std::cout << curation::render_findings(report);
    if (!worksheet.empty()) write_output(worksheet, curation::render_worksheet(items, report));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"pitchside: plan-and-execute soccer QA agent runtime"};
    app.require_subcommand(1);
    Flags flags;

    std::string question, trace_path;
    std::vector<std::string> materials;
    bool plan_only = false;
    auto* ask = app.add_subcommand("ask", "answer one question");
    ask->add_option("question", question, "question text")->required();
    ask->add_option("-m,--material", materials, "material file (repeatable)");
    ask->add_flag("--plan-only", plan_only, "print the planned tool chain and stop");
    ask->add_option("--trace", trace_path, "trace output file");
    add_run_flags(*ask, flags);

    std::string dataset, tasks, report_text, report_json, failures_path;
    auto* eval = app.add_subcommand("eval", "evaluate on a multi-choice dataset");
    eval->add_option("dataset", dataset, "dataset (JSON Lines)")->required();
    eval->add_option("--tasks", tasks, "comma-separated task filter, e.g. Q1,Q2");
    eval->add_option("--report", report_text, "human-readable report file");
    eval->add_option("--report-json", report_json, "machine-readable report file");
    eval->add_option("--failures", failures_path, "failure list file");
    add_run_flags(*eval, flags);

    auto* ingest = app.add_subcommand("ingest", "load a corpus and print its counts");
    add_run_flags(*ingest, flags);

    auto* tools = app.add_subcommand("tools", "list registered tools and aliases");
    add_run_flags(*tools, flags);

    std::string annotations, curate_out, templates = std::string(PITCHSIDE_DATA_DIR) + "/templates.json",
                                         pools = std::string(PITCHSIDE_DATA_DIR) + "/label_pools.json",
                                         strategy = "category", mode = "template";
    auto* curate = app.add_subcommand("curate", "generate a multi-choice dataset from annotations");
    curate->add_option("annotations", annotations, "annotation records (JSON Lines)")->required();
    curate->add_option("-o,--out", curate_out, "output dataset")->required();
    curate->add_option("--templates", templates, "template bank");
    curate->add_option("--pools", pools, "label pools");
    curate->add_option("--strategy", strategy, "category | confuser");
    curate->add_option("--mode", mode, "template | model")->check(CLI::IsMember({"template", "model"}));
    add_run_flags(*curate, flags);

    std::string validate_dataset, worksheet;
    auto* validate = app.add_subcommand("validate", "check a dataset and emit a review worksheet");
    validate->add_option("dataset", validate_dataset, "dataset (JSON Lines)")->required();
    validate->add_option("--worksheet", worksheet, "review worksheet output (tab-separated)");

    CLI11_PARSE(app, argc, argv);

    try {
        Settings settings;
        settings.load_config(flags.config.value_or(""));
        if (ask->parsed()) return cmd_ask(settings, flags, question, materials, plan_only, trace_path);
        if (eval->parsed()) return cmd_eval(settings, flags, dataset, tasks, report_text, report_json, failures_path);
        if (ingest->parsed()) return cmd_ingest(settings, flags);
        if (tools->parsed()) return cmd_tools(settings, flags);
        if (curate->parsed()) {
            return cmd_curate(settings, flags, annotations, curate_out, templates, pools, strategy, mode);
        }
        if (validate->parsed()) return cmd_validate(validate_dataset, worksheet);
    } catch (const Error& e) {
        std::cerr << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
