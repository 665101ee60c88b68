#pragma once

/// @file adapters.hpp
/// @brief Platform bindings connecting the corpus controllers to simulated robots.

#include "smforge/runtime.hpp"
#include "smforge/sim/kinematics.hpp"
#include "smforge/sim/sensors.hpp"

#include <optional>

namespace smforge::sim {

/// A platform binding that also senses the world before each cycle and turns
/// the cycle's trace into wheel commands afterwards.
class RobotAdapter : public PlatformBinding {
public:
    /// Samples sensors from a frozen world snapshot.
    virtual void sense(const World& world, std::size_t robot) = 0;
    /// Wheel speeds to latch for the coming control step.
    virtual WheelSpeeds actuate(const TraceRecord& rec, const RobotBody& body) = 0;
};

/// Line-of-sight controller: `seeWall`/`seeRobot` from the forward ray,
/// wheels from the last `MoveClockwise(angular, linear)` or
/// `RotateClockwise(angular)` call of the cycle.
class AggregationAdapter final : public RobotAdapter {
public:
    bool binds(std::string_view op) const override;
    void publishEvents(const CompiledMachine& machine, std::span<const Value> vars, std::vector<bool>& flags) override;
    std::vector<VarWrite> invoke(const ExternalCall& call) override;
    void sense(const World& world, std::size_t robot) override;
    WheelSpeeds actuate(const TraceRecord& rec, const RobotBody& body) override;

    std::optional<LosHit> lastReading() const { return reading_; }

private:
    std::optional<LosHit> reading_;
};

struct TaxisParams {
    double forwardSpeed = 6.4;      // cm/s
    double turnRate = 5.0;          // rad/s
    double coherenceRange = 200.0;  // cm
    double avoidanceUnit = 100.0;   // cm per unit of the model's avoidanceRadius
    double controlDt = 0.1;         // s
};

/// Range-and-bearing plus illumination controller.
///
/// Reads `avoidanceRadius` and writes `illuminated`, `desiredTurningDegree`
/// and `reached`. `Turn` rotates in place at turnRate, at most the remaining
/// angle per cycle, and reports `reached` on the cycle that completes it.
class TaxisAdapter final : public RobotAdapter {
public:
    explicit TaxisAdapter(TaxisParams params = {}) : params_(params) {}

    bool binds(std::string_view op) const override;
    void publishEvents(const CompiledMachine& machine, std::span<const Value> vars, std::vector<bool>& flags) override;
    std::vector<VarWrite> invoke(const ExternalCall& call) override;
    void sense(const World& world, std::size_t robot) override;
    WheelSpeeds actuate(const TraceRecord& rec, const RobotBody& body) override;

    const TaxisParams& params() const { return params_; }

private:
    double avoidanceRadiusCm(const CompiledMachine& m, std::span<const Value> vars) const;
    std::vector<VarWrite> write(const CompiledMachine& m, std::string_view var, Value v) const;

    TaxisParams params_;
    std::vector<Neighbor> neighbors_;  // within the widest radius any operation needs
    bool illuminated_ = false;
    double turned_ = 0.0;
    std::optional<WheelSpeeds> command_;
    double maxSpeed_ = 12.8;
    double wheelDistance_ = 5.1;
};

}  // namespace smforge::sim
