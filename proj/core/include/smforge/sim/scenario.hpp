#pragma once

/// @file scenario.hpp
/// @brief Scenario files, robot placement and whole-run execution.

#include "smforge/compiled.hpp"
#include "smforge/sim/metrics.hpp"
#include "smforge/sim/world.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace smforge::sim {

class ScenarioError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Platform { Aggregation, Taxis };

struct ScenarioParams {
    double forwardSpeedCmS = 6.4;
    double turnRateRadS = 5.0;
    double coherenceRangeCm = 200.0;
    double avoidanceUnitCm = 100.0;
    double timeUnitS = 0.1;  // simulated seconds per model time unit
    double clusterThresholdCm = 10.0;
    double bodyRadiusCm = 3.7;
    double maxWheelSpeedCmS = 12.8;
    double wheelDistanceCm = 5.1;
    double physicsDtS = 0.01;
    double controlDtS = 0.1;
};

struct ScenarioConfig {
    Arena arena;
    std::size_t robots = 20;
    std::uint64_t seed = 1;
    double durationS = 300.0;
    Platform platform = Platform::Aggregation;
    /// Compiled controller file; the built-in model for `platform` when empty.
    std::filesystem::path irPath;
    ScenarioParams params;
    std::optional<Point> beacon;
    std::filesystem::path tracePath;
    std::filesystem::path metricsPath;

    /// Throws ScenarioError describing the first invalid setting.
    void validate() const;
};

/// Parses scenario JSON; relative output and IR paths resolve against
/// `baseDir`. Throws ScenarioError.
ScenarioConfig parseScenario(std::string_view json, const std::filesystem::path& baseDir = {});

/// Robots placed without overlap from the placement stream: anywhere for
/// aggregation, in the left third of the arena for taxis. Headings come from
/// each robot's own stream.
World initialWorld(const ScenarioConfig& config);

/// Compiled corpus controller of a platform.
CompiledMachine builtinController(Platform platform);

struct MetricsRow {
    long t = 0;  // simulated seconds
    double clusterFraction = 0.0;
    std::optional<TaxisMetrics> taxis;
};

MetricsRow measure(const World& world, long t, double clusterThreshold);

struct SimResult {
    MetricsRow initial;
    std::vector<MetricsRow> rows;  // one per whole simulated second
    World finalWorld;
    std::string trace;  // NDJSON, filled only when requested
};

/// Runs a whole scenario. Throws SimulationFault on a controller fault.
SimResult runScenario(const ScenarioConfig& config, const CompiledMachine& machine, bool recordTrace = false);

/// Two header lines (`# smforge <version> seed=<n> rng=<name>` and the
/// column names) followed by the rows.
std::string metricsCsv(const ScenarioConfig& config, const std::vector<MetricsRow>& rows);

}  // namespace smforge::sim
