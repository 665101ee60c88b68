#include "smforge/sim/adapters.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace smforge::sim {

namespace {

void raise(const CompiledMachine& m, std::string_view event, std::vector<bool>& flags) {
    if (auto e = m.eventIndex(event)) flags[*e] = true;
}

double realArg(const Value& v) {
    if (const auto* d = std::get_if<double>(&v)) return *d;
    if (const auto* i = std::get_if<std::int64_t>(&v)) return static_cast<double>(*i);
    throw std::invalid_argument("expected a numeric argument");
}

/// Direction of the mean relative position of `ns`, in the robot frame.
double meanBearing(const std::vector<const Neighbor*>& ns) {
    double x = 0.0;
    double y = 0.0;
    for (const auto* n : ns) {
        x += n->range * std::cos(n->bearing);
        y += n->range * std::sin(n->bearing);
    }
    return std::atan2(y, x);
}

}  // namespace

// --- aggregation ------------------------------------------------------------------

bool AggregationAdapter::binds(std::string_view op) const {
    return op == "MoveClockwise" || op == "RotateClockwise";
}

void AggregationAdapter::publishEvents(const CompiledMachine& machine, std::span<const Value>, std::vector<bool>& flags) {
    if (!reading_) return;
    raise(machine, *reading_ == LosHit::Wall ? "seeWall" : "seeRobot", flags);
}

std::vector<VarWrite> AggregationAdapter::invoke(const ExternalCall&) {
    return {};
}

void AggregationAdapter::sense(const World& world, std::size_t robot) {
    reading_ = raycastLineOfSight(world, robot);
}

WheelSpeeds AggregationAdapter::actuate(const TraceRecord& rec, const RobotBody& body) {
    for (auto it = rec.ops.rbegin(); it != rec.ops.rend(); ++it) {
        if (it->name == "MoveClockwise" && it->args.size() == 2)
            return bodyToWheel(realArg(it->args[1]), realArg(it->args[0]), body.maxSpeed, body.wheelDistance).wheels;
        if (it->name == "RotateClockwise" && it->args.size() == 1)
            return bodyToWheel(0.0, realArg(it->args[0]), body.maxSpeed, body.wheelDistance).wheels;
    }
    return body.wheels;
}

// --- taxis ------------------------------------------------------------------------

bool TaxisAdapter::binds(std::string_view op) const {
    return op == "CheckIlluminationStatus" || op == "UpdateAvoidanceRadius" || op == "CalcAvoidanceHeading" ||
           op == "CalcCoherenceHeading" || op == "Turn" || op == "MoveForward";
}

double TaxisAdapter::avoidanceRadiusCm(const CompiledMachine& m, std::span<const Value> vars) const {
    auto slot = m.varIndex("avoidanceRadius");
    if (!slot) return 0.0;
    return realArg(vars[*slot]) * params_.avoidanceUnit;
}

std::vector<VarWrite> TaxisAdapter::write(const CompiledMachine& m, std::string_view var, Value v) const {
    auto slot = m.varIndex(var);
    if (!slot) return {};
    if (m.vars[*slot].type == TypeKind::Real && typeOf(v) == TypeKind::Int)
        v = static_cast<double>(std::get<std::int64_t>(v));
    return {{*slot, std::move(v)}};
}

void TaxisAdapter::publishEvents(const CompiledMachine& machine, std::span<const Value> vars, std::vector<bool>& flags) {
    const double radius = avoidanceRadiusCm(machine, vars);
    if (!neighbors_.empty() && neighbors_.front().range <= radius) raise(machine, "robotDetected", flags);
}

std::vector<VarWrite> TaxisAdapter::invoke(const ExternalCall& call) {
    const auto& m = call.machine;
    const auto& name = m.externalOps[call.index].sig.name;
    if (name == "CheckIlluminationStatus") return write(m, "illuminated", illuminated_);
    if (name == "UpdateAvoidanceRadius") return write(m, "avoidanceRadius", illuminated_ ? 0.2 : 0.1);
    if (name == "MoveForward") {
        command_ = WheelSpeeds{params_.forwardSpeed, params_.forwardSpeed};
        return {};
    }
    if (name == "CalcAvoidanceHeading" || name == "CalcCoherenceHeading") {
        const bool avoid = name == "CalcAvoidanceHeading";
        const double radius = avoid ? avoidanceRadiusCm(m, call.vars) : params_.coherenceRange;
        std::vector<const Neighbor*> ns;
        for (const auto& n : neighbors_)
            if (n.range <= radius) ns.push_back(&n);
        turned_ = 0.0;
        double desired = 0.0;
        bool reached = ns.empty();
        if (!ns.empty()) desired = normalizeAngle(meanBearing(ns) + (avoid ? std::numbers::pi : 0.0));
        auto out = write(m, "desiredTurningDegree", desired);
        auto more = write(m, "reached", reached);
        out.insert(out.end(), more.begin(), more.end());
        return out;
    }
    if (name == "Turn") {
        const double target = call.args.empty() ? 0.0 : realArg(call.args[0]);
        const double maxStep = params_.turnRate * params_.controlDt;
        const double remaining = std::max(std::abs(target) - turned_, 0.0);
        const double step = std::min(maxStep, remaining);
        turned_ += step;
        const double omega = std::copysign(step / params_.controlDt, target);
        command_ = bodyToWheel(0.0, omega, maxSpeed_, wheelDistance_).wheels;
        if (remaining <= maxStep) return write(m, "reached", true);
        return {};
    }
    return {};
}

void TaxisAdapter::sense(const World& world, std::size_t robot) {
    neighbors_ = neighborsWithin(world, robot, std::numeric_limits<double>::infinity());
    illuminated_ = world.beacon ? isIlluminated(world, robot) : false;
    command_.reset();
    maxSpeed_ = world.robots[robot].maxSpeed;
    wheelDistance_ = world.robots[robot].wheelDistance;
}

WheelSpeeds TaxisAdapter::actuate(const TraceRecord&, const RobotBody& body) {
    return command_.value_or(body.wheels);
}

}  // namespace smforge::sim
