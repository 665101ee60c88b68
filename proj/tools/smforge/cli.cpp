#include "smforge/cli.hpp"

#include "smforge/analyzer.hpp"
#include "smforge/codegen.hpp"
#include "smforge/compiler.hpp"
#include "smforge/files.hpp"
#include "smforge/ir.hpp"
#include "smforge/runtime.hpp"
#include "smforge/sim/scenario.hpp"
#include "smforge/sim/simulation.hpp"
#include "smforge/trace_io.hpp"

#include <CLI11.hpp>
#include <spdlog/sinks/ostream_sink.h>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <memory>
#include <ostream>

namespace smforge::cli {

namespace {

namespace fs = std::filesystem;

/// A failure that maps directly onto an exit code.
struct Exit {
    int code;
    std::string message;
};

std::shared_ptr<spdlog::logger> makeLogger(std::ostream& err) {
    auto sink = std::make_shared<spdlog::sinks::ostream_sink_mt>(err);
    auto log = std::make_shared<spdlog::logger>("smforge", sink);
    log->set_pattern("smforge: %l: %v");
    auto level = spdlog::level::warn;
    if (const char* env = std::getenv("SMFORGE_LOG")) {
        const std::string v = env;
        if (v == "error") level = spdlog::level::err;
        else if (v == "warn") level = spdlog::level::warn;
        else if (v == "info") level = spdlog::level::info;
        else if (v == "debug") level = spdlog::level::debug;
        else log->warn("ignoring SMFORGE_LOG={} (expected error, warn, info or debug)", v);
    }
    log->set_level(level);
    return log;
}

std::string read(const fs::path& p) {
    try {
        return readFile(p);
    } catch (const IoError& e) {
        throw Exit{kIoError, e.what()};
    }
}

void write(const fs::path& p, const std::string& contents) {
    try {
        writeFileAtomic(p, contents);
    } catch (const IoError& e) {
        throw Exit{kIoError, e.what()};
    }
}

/// Parses and checks a model; prints diagnostics to `err` and throws on errors.
ResolvedModel checkedModel(const fs::path& path, std::ostream& err, spdlog::logger& log) {
    const auto text = read(path);
    auto result = checkSource(text, path.string());
    for (const auto& d : result.diagnostics)
        if (d.severity == Severity::Error || !result.model) err << formatDiagnostic(d) << '\n';
    if (!result.model) throw Exit{kModelError, path.string() + ": model has errors"};
    log.info("{}: {} machine(s), {} interface(s)", path.string(), result.model->unit.machines.size(),
             result.model->unit.interfaces.size());
    return std::move(*result.model);
}

CompiledMachine compileMachine(const ResolvedModel& model, const std::string& machine) {
    try {
        return compile(model, machine);
    } catch (const CompileError& e) {
        throw Exit{kModelError, e.what()};
    }
}

// --- subcommands -------------------------------------------------------------------

struct CheckArgs {
    std::string model;
    std::string format = "text";
};

int cmdCheck(const CheckArgs& a, std::ostream& out, spdlog::logger& log) {
    const auto text = read(a.model);
    const auto result = checkSource(text, a.model);
    if (a.format == "json")
        out << diagnosticsToJson(result.diagnostics) << '\n';
    else
        out << formatDiagnostics(result.diagnostics);
    log.info("{}: {} diagnostic(s)", a.model, result.diagnostics.size());
    return result.model ? kOk : kModelError;
}

struct CompileArgs {
    std::string model;
    std::string machine;
    std::string output;
};

int cmdCompile(const CompileArgs& a, std::ostream& err, spdlog::logger& log) {
    const auto model = checkedModel(a.model, err, log);
    const auto cm = compileMachine(model, a.machine);
    write(a.output, serializeIr(cm));
    log.info("wrote {} ({} states, {} transitions)", a.output, cm.body.states.size(), cm.body.transitions.size());
    return kOk;
}

int cmdCodegen(const CompileArgs& a, std::ostream& err, spdlog::logger& log) {
    const auto model = checkedModel(a.model, err, log);
    if (model.unit.machines.empty()) throw Exit{kModelError, a.model + ": nothing to generate"};
    const auto cm = compileMachine(model, a.machine);
    std::vector<const ast::InterfaceDecl*> ifaces;
    for (const auto& r : model.unit.findMachine(a.machine)->required) ifaces.push_back(model.unit.findInterface(r.name));

    std::error_code ec;
    fs::create_directories(a.output, ec);
    if (ec) throw Exit{kIoError, "cannot create " + a.output + ": " + ec.message()};
    for (const auto& unit : emitUnits(cm, ifaces)) {
        const auto path = fs::path(a.output) / (unit.name + std::string(kGeneratedExtension));
        write(path, unit.text);
        log.info("wrote {}", path.string());
    }
    return kOk;
}

struct RunArgs {
    std::string ir;
    std::string script;
    std::uint64_t maxCycles = 0;
    std::string output;
    std::vector<std::string> watch;
    double timeUnit = 1.0;
};

CompiledMachine loadIrFile(const fs::path& path) {
    const auto bytes = read(path);
    try {
        return loadIr(bytes);
    } catch (const IrError& e) {
        throw Exit{kModelError, path.string() + ": " + e.what()};
    }
}

int cmdRun(const RunArgs& a, std::ostream& err, spdlog::logger& log) {
    const auto cm = loadIrFile(a.ir);
    const auto scriptText = read(a.script);
    EventScript script;
    try {
        script = parseEventScript(scriptText);
    } catch (const FormatError& e) {
        throw Exit{kModelError, a.script + ": " + e.what()};
    }

    NullPlatform platform;
    RuntimeConfig config;
    config.timeUnit = a.timeUnit;
    config.watch = a.watch;
    std::vector<TraceRecord> trace;
    std::optional<ExecutionContext> ctx;
    try {
        ctx.emplace(createContext(cm, platform, config));
        trace = runScript(*ctx, script, a.maxCycles);
    } catch (const RuntimeError& e) {
        throw Exit{kModelError, e.what()};
    }
    write(a.output, traceToNdjson(trace));
    log.info("wrote {} ({} cycles)", a.output, trace.size());
    if (ctx->status() == Status::Faulted) {
        err << "smforge: cycle " << trace.back().cycle << ": " << ctx->fault()->describe() << '\n';
        return kRuntimeFault;
    }
    return kOk;
}

struct SimArgs {
    std::string scenario;
    std::optional<std::uint64_t> seed;
    std::string metrics;
    std::string trace;
};

std::string formatMetric(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

int cmdSim(const SimArgs& a, std::ostream& out, spdlog::logger& log) {
    const auto text = read(a.scenario);
    sim::ScenarioConfig config;
    try {
        config = sim::parseScenario(text, fs::path(a.scenario).parent_path());
        if (a.seed) config.seed = *a.seed;
        if (!a.metrics.empty()) config.metricsPath = a.metrics;
        if (!a.trace.empty()) config.tracePath = a.trace;
        config.validate();
    } catch (const sim::ScenarioError& e) {
        throw Exit{kModelError, a.scenario + ": " + e.what()};
    }

    const auto machine = config.irPath.empty() ? sim::builtinController(config.platform) : loadIrFile(config.irPath);
    log.info("simulating {} robots for {} s, seed {}", config.robots, config.durationS, config.seed);
    sim::SimResult result;
    try {
        result = sim::runScenario(config, machine, !config.tracePath.empty());
    } catch (const RuntimeError& e) {
        throw Exit{kModelError, e.what()};
    } catch (const sim::SimulationFault& e) {
        throw Exit{kRuntimeFault, e.what()};
    }

    if (!config.metricsPath.empty()) write(config.metricsPath, sim::metricsCsv(config, result.rows));
    if (!config.tracePath.empty()) write(config.tracePath, result.trace);

    const auto& last = result.rows.empty() ? result.initial : result.rows.back();
    out << "t_s=" << last.t << " cluster_fraction=" << formatMetric(last.clusterFraction);
    if (last.taxis)
        out << " centroid_beacon_dist_cm=" << formatMetric(last.taxis->centroidBeaconDistance)
            << " max_spread_cm=" << formatMetric(last.taxis->maxSpread);
    out << '\n';
    return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    auto log = makeLogger(err);

    CLI::App app{"State-machine controller toolchain and swarm simulator", "smforge"};
    app.set_version_flag("--version", SMFORGE_VERSION);
    app.require_subcommand(1);

    CheckArgs check;
    auto* checkCmd = app.add_subcommand("check", "Parse and analyze a model, printing diagnostics");
    checkCmd->add_option("model", check.model, "Model file (.rcm)")->required();
    checkCmd->add_option("--format", check.format, "Diagnostic format")->check(CLI::IsMember({"text", "json"}));

    CompileArgs compileArgs;
    auto* compileCmd = app.add_subcommand("compile", "Compile one machine to IR");
    compileCmd->add_option("model", compileArgs.model, "Model file (.rcm)")->required();
    compileCmd->add_option("--machine", compileArgs.machine, "Machine name")->required();
    compileCmd->add_option("-o,--output", compileArgs.output, "Output .smir.json file")->required();

    CompileArgs codegenArgs;
    auto* codegenCmd = app.add_subcommand("codegen", "Emit class-style source text for one machine");
    codegenCmd->add_option("model", codegenArgs.model, "Model file (.rcm)")->required();
    codegenCmd->add_option("--machine", codegenArgs.machine, "Machine name")->required();
    codegenCmd->add_option("-o,--output", codegenArgs.output, "Output directory")->required();

    RunArgs runArgs;
    auto* runCmd = app.add_subcommand("run", "Interpret compiled IR against an event script");
    runCmd->add_option("ir", runArgs.ir, "Compiled machine (.smir.json)")->required();
    runCmd->add_option("--script", runArgs.script, "Event script (NDJSON)")->required();
    runCmd->add_option("--max-cycles", runArgs.maxCycles, "Maximum cycles to run")->required();
    runCmd->add_option("-o,--output", runArgs.output, "Trace output (NDJSON)")->required();
    runCmd->add_option("--watch", runArgs.watch, "Variables to record each cycle")->delimiter(',');
    runCmd->add_option("--time-unit", runArgs.timeUnit, "Time units per cycle");

    SimArgs simArgs;
    auto* simCmd = app.add_subcommand("sim", "Run a swarm scenario");
    simCmd->add_option("scenario", simArgs.scenario, "Scenario file (JSON)")->required();
    simCmd->add_option("--seed", simArgs.seed, "Override the scenario seed");
    simCmd->add_option("--metrics", simArgs.metrics, "Override the metrics CSV path");
    simCmd->add_option("--trace", simArgs.trace, "Override the trace NDJSON path");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kModelError;
    }

    try {
        if (*checkCmd) return cmdCheck(check, out, *log);
        if (*compileCmd) return cmdCompile(compileArgs, err, *log);
        if (*codegenCmd) return cmdCodegen(codegenArgs, err, *log);
        if (*runCmd) return cmdRun(runArgs, err, *log);
        if (*simCmd) return cmdSim(simArgs, out, *log);
    } catch (const Exit& e) {
        log->error("{}", e.message);
        return e.code;
    } catch (const std::exception& e) {
        log->error("internal error: {}", e.what());
        return kRuntimeFault;
    }
    return kModelError;
}

}  // namespace smforge::cli
