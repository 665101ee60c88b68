#include "smforge/sim/scenario.hpp"

#include "smforge/analyzer.hpp"
#include "smforge/compiler.hpp"
#include "smforge/corpus.hpp"
#include "smforge/sim/rng.hpp"
#include "smforge/sim/simulation.hpp"
#include "smforge/trace_io.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <numbers>

namespace smforge::sim {

namespace {

using json = nlohmann::json;

constexpr int kPlacementAttempts = 100000;

[[noreturn]] void bad(const std::string& what) {
    throw ScenarioError(what);
}

double number(const json& v, const std::string& key) {
    if (!v.is_number()) bad("'" + key + "' must be a number");
    return v.get<double>();
}

void checkKeys(const json& obj, std::initializer_list<std::string_view> allowed, const std::string& where) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool ok = false;
        for (auto a : allowed) ok = ok || it.key() == a;
        if (!ok) bad("unknown key '" + it.key() + "' in " + where);
    }
}

Platform platformFromName(const std::string& name) {
    if (name == "aggregation") return Platform::Aggregation;
    if (name == "taxis") return Platform::Taxis;
    bad("unknown platform '" + name + "' (expected aggregation or taxis)");
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
    std::filesystem::path path(p);
    return path.is_absolute() || base.empty() ? path : base / path;
}

void parseParams(const json& params, ScenarioParams& out) {
    if (!params.is_object()) bad("'params' must be an object");
    const std::pair<const char*, double*> fields[] = {
        {"forward_speed_cm_s", &out.forwardSpeedCmS},     {"turn_rate_rad_s", &out.turnRateRadS},
        {"coherence_range_cm", &out.coherenceRangeCm},    {"avoidance_unit_cm", &out.avoidanceUnitCm},
        {"time_unit_s", &out.timeUnitS},                  {"cluster_threshold_cm", &out.clusterThresholdCm},
        {"body_radius_cm", &out.bodyRadiusCm},            {"max_wheel_speed_cm_s", &out.maxWheelSpeedCmS},
        {"wheel_distance_cm", &out.wheelDistanceCm},      {"physics_dt_s", &out.physicsDtS},
        {"control_dt_s", &out.controlDtS},
    };
    for (auto it = params.begin(); it != params.end(); ++it) {
        bool known = false;
        for (const auto& [key, slot] : fields)
            if (it.key() == key) {
                *slot = number(*it, key);
                known = true;
            }
        if (!known) bad("unknown parameter '" + it.key() + "'");
    }
}

std::string fixed(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

long cyclesPerSecond(double controlDt) {
    const double perSecond = 1.0 / controlDt;
    const double n = std::round(perSecond);
    if (n < 1.0 || std::abs(perSecond - n) > 1e-9 * n) bad("control_dt_s must divide one second evenly");
    return static_cast<long>(n);
}

}  // namespace

void ScenarioConfig::validate() const {
    auto positive = [](double v, const char* what) {
        if (!(v > 0.0) || !std::isfinite(v)) bad(std::string(what) + " must be positive");
    };
    positive(arena.width, "arena width");
    positive(arena.height, "arena height");
    if (robots < 1) bad("robots must be at least 1");
    positive(durationS, "duration_s");
    positive(params.forwardSpeedCmS, "forward_speed_cm_s");
    positive(params.turnRateRadS, "turn_rate_rad_s");
    positive(params.coherenceRangeCm, "coherence_range_cm");
    positive(params.avoidanceUnitCm, "avoidance_unit_cm");
    positive(params.timeUnitS, "time_unit_s");
    positive(params.clusterThresholdCm, "cluster_threshold_cm");
    positive(params.bodyRadiusCm, "body_radius_cm");
    positive(params.maxWheelSpeedCmS, "max_wheel_speed_cm_s");
    positive(params.wheelDistanceCm, "wheel_distance_cm");
    positive(params.physicsDtS, "physics_dt_s");
    positive(params.controlDtS, "control_dt_s");
    if (2.0 * params.bodyRadiusCm >= std::min(arena.width, arena.height)) bad("arena is too small for one robot");
    World probe;
    probe.physicsDt = params.physicsDtS;
    probe.controlDt = params.controlDtS;
    try {
        probe.substeps();
    } catch (const std::invalid_argument& e) {
        bad(e.what());
    }
    cyclesPerSecond(params.controlDtS);
    if (platform == Platform::Taxis && !beacon) bad("beacon required for the taxis platform");
    if (beacon && (beacon->x < 0 || beacon->x > arena.width || beacon->y < 0 || beacon->y > arena.height))
        bad("beacon lies outside the arena");
}

ScenarioConfig parseScenario(std::string_view text, const std::filesystem::path& baseDir) {
    json doc = json::parse(text.begin(), text.end(), nullptr, false);
    if (doc.is_discarded()) bad("scenario is not valid JSON");
    if (!doc.is_object()) bad("scenario must be a JSON object");
    checkKeys(doc, {"arena", "robots", "seed", "duration_s", "controller", "params", "beacon", "outputs"}, "scenario");

    ScenarioConfig cfg;
    if (doc.contains("arena")) {
        const auto& a = doc["arena"];
        if (!a.is_object() || !a.contains("w_cm") || !a.contains("h_cm")) bad("'arena' needs w_cm and h_cm");
        checkKeys(a, {"w_cm", "h_cm"}, "arena");
        cfg.arena = {number(a["w_cm"], "w_cm"), number(a["h_cm"], "h_cm")};
    }
    if (doc.contains("robots")) {
        if (!doc["robots"].is_number_unsigned()) bad("'robots' must be a non-negative integer");
        cfg.robots = doc["robots"].get<std::size_t>();
    }
    if (doc.contains("seed")) {
        if (!doc["seed"].is_number_unsigned()) bad("'seed' must be a non-negative integer");
        cfg.seed = doc["seed"].get<std::uint64_t>();
    }
    if (doc.contains("duration_s")) cfg.durationS = number(doc["duration_s"], "duration_s");
    if (doc.contains("controller")) {
        const auto& c = doc["controller"];
        if (c.is_string()) {
            cfg.platform = platformFromName(c.get<std::string>());
        } else if (c.is_object()) {
            checkKeys(c, {"ir", "platform"}, "controller");
            if (!c.contains("ir") || !c["ir"].is_string()) bad("controller object needs an 'ir' path");
            if (!c.contains("platform") || !c["platform"].is_string())
                bad("controller object needs a 'platform' (aggregation or taxis)");
            cfg.irPath = resolve(baseDir, c["ir"].get<std::string>());
            cfg.platform = platformFromName(c["platform"].get<std::string>());
        } else {
            bad("'controller' must be a name or an object");
        }
    }
    if (doc.contains("params")) parseParams(doc["params"], cfg.params);
    if (doc.contains("beacon")) {
        const auto& b = doc["beacon"];
        if (!b.is_object() || !b.contains("x_cm") || !b.contains("y_cm")) bad("'beacon' needs x_cm and y_cm");
        checkKeys(b, {"x_cm", "y_cm"}, "beacon");
        cfg.beacon = Point{number(b["x_cm"], "x_cm"), number(b["y_cm"], "y_cm")};
    }
    if (doc.contains("outputs")) {
        const auto& o = doc["outputs"];
        if (!o.is_object()) bad("'outputs' must be an object");
        checkKeys(o, {"trace", "metrics"}, "outputs");
        for (const char* key : {"trace", "metrics"})
            if (o.contains(key) && !o[key].is_string()) bad(std::string("output '") + key + "' must be a path");
        if (o.contains("trace")) cfg.tracePath = resolve(baseDir, o["trace"].get<std::string>());
        if (o.contains("metrics")) cfg.metricsPath = resolve(baseDir, o["metrics"].get<std::string>());
    }
    cfg.validate();
    return cfg;
}

World initialWorld(const ScenarioConfig& config) {
    config.validate();
    const auto& p = config.params;
    World world;
    world.arena = config.arena;
    world.beacon = config.beacon;
    world.physicsDt = p.physicsDtS;
    world.controlDt = p.controlDtS;

    const double r = p.bodyRadiusCm;
    const double xMax = config.platform == Platform::Taxis ? config.arena.width / 3.0 : config.arena.width;
    if (xMax - r <= r) bad("placement region is too small");
    auto placement = makeStream(config.seed, 0);
    for (std::size_t i = 0; i < config.robots; ++i) {
        RobotBody body;
        body.bodyRadius = r;
        body.wheelDistance = p.wheelDistanceCm;
        body.maxSpeed = p.maxWheelSpeedCmS;
        bool placed = false;
        for (int attempt = 0; attempt < kPlacementAttempts && !placed; ++attempt) {
            body.pose.x = uniform(placement, r, xMax - r);
            body.pose.y = uniform(placement, r, config.arena.height - r);
            placed = true;
            for (const auto& other : world.robots)
                if (std::hypot(other.pose.x - body.pose.x, other.pose.y - body.pose.y) < r + other.bodyRadius)
                    placed = false;
        }
        if (!placed) bad("cannot place " + std::to_string(config.robots) + " robots without overlap");
        auto own = makeStream(config.seed, 1 + i);
        body.pose.theta = normalizeAngle(uniform(own, -std::numbers::pi, std::numbers::pi));
        world.robots.push_back(body);
    }
    return world;
}

CompiledMachine builtinController(Platform platform) {
    const bool agg = platform == Platform::Aggregation;
    const auto source = agg ? corpus::aggregationSource() : corpus::taxisSource();
    auto checked = checkSource(source, agg ? "aggregation.rcm" : "taxis.rcm");
    if (!checked.model) throw std::logic_error("built-in controller model does not check: " + formatDiagnostics(checked.diagnostics));
    return compile(*checked.model, agg ? corpus::kAggregationMachine : corpus::kTaxisMachine);
}

MetricsRow measure(const World& world, long t, double clusterThreshold) {
    MetricsRow row{t, clusterFraction(world, clusterThreshold), std::nullopt};
    if (world.beacon) row.taxis = taxisMetrics(world);
    return row;
}

SimResult runScenario(const ScenarioConfig& config, const CompiledMachine& machine, bool recordTrace) {
    const auto& p = config.params;
    RuntimeConfig rc;
    rc.timeUnit = p.controlDtS / p.timeUnitS;

    Simulation::AdapterFactory factory;
    if (config.platform == Platform::Aggregation) {
        factory = [] { return std::make_unique<AggregationAdapter>(); };
    } else {
        TaxisParams tp{p.forwardSpeedCmS, p.turnRateRadS, p.coherenceRangeCm, p.avoidanceUnitCm, p.controlDtS};
        factory = [tp] { return std::make_unique<TaxisAdapter>(tp); };
    }

    auto shared = std::make_shared<const CompiledMachine>(machine);
    Simulation sim(initialWorld(config), shared, factory, rc);

    SimResult result;
    result.initial = measure(sim.world(), 0, p.clusterThresholdCm);
    const long perSecond = cyclesPerSecond(p.controlDtS);
    const auto totalCycles = static_cast<long>(std::llround(config.durationS * static_cast<double>(perSecond)));
    for (long cycle = 1; cycle <= totalCycles; ++cycle) {
        auto records = sim.step();
        if (recordTrace)
            for (std::size_t i = 0; i < records.size(); ++i) {
                result.trace += traceRecordToJson(records[i], i);
                result.trace += '\n';
            }
        if (cycle % perSecond == 0) result.rows.push_back(measure(sim.world(), cycle / perSecond, p.clusterThresholdCm));
    }
    result.finalWorld = sim.world();
    return result;
}

std::string metricsCsv(const ScenarioConfig& config, const std::vector<MetricsRow>& rows) {
    std::string out = "# smforge " SMFORGE_VERSION " seed=" + std::to_string(config.seed) + " rng=" + std::string(kRngName) + "\n";
    out += "t_s,cluster_fraction,centroid_beacon_dist_cm,max_spread_cm\n";
    for (const auto& r : rows) {
        out += std::to_string(r.t) + "," + fixed(r.clusterFraction) + ",";
        if (r.taxis) out += fixed(r.taxis->centroidBeaconDistance) + "," + fixed(r.taxis->maxSpread);
        else out += ",";
        out += "\n";
    }
    return out;
}

}  // namespace smforge::sim
