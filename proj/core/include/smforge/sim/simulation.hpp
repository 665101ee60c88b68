#pragma once

#include "smforge/compiled.hpp"
#include "smforge/runtime.hpp"
#include "smforge/sim/adapters.hpp"
#include "smforge/sim/world.hpp"

#include <functional>
#include <memory>
#include <span>
#include <stdexcept>
#include <vector>

namespace smforge::sim {

class SimulationFault : public std::runtime_error {
public:
    SimulationFault(std::size_t robot, const std::string& what)
        : std::runtime_error("robot " + std::to_string(robot) + ": " + what), robot_(robot) {}
    std::size_t robot() const { return robot_; }

private:
    std::size_t robot_;
};

/// One control cycle: every adapter senses the frozen world, every context
/// steps once, wheel commands latch, the physics substeps run, and the world
/// clock advances. Throws SimulationFault when a context faults.
std::vector<TraceRecord> stepWorld(World& world, std::span<ExecutionContext> contexts,
                                   std::span<RobotAdapter* const> adapters);

/// A world with one controller instance per robot.
class Simulation {
public:
    using AdapterFactory = std::function<std::unique_ptr<RobotAdapter>()>;

    Simulation(World world, std::shared_ptr<const CompiledMachine> machine, const AdapterFactory& makeAdapter,
               RuntimeConfig config = {});

    Simulation(const Simulation&) = delete;
    Simulation& operator=(const Simulation&) = delete;

    std::vector<TraceRecord> step();

    const World& world() const { return world_; }
    World& world() { return world_; }
    std::span<const ExecutionContext> contexts() const { return contexts_; }
    RobotAdapter& adapter(std::size_t robot) { return *adapters_.at(robot); }

private:
    World world_;
    std::shared_ptr<const CompiledMachine> machine_;
    std::vector<std::unique_ptr<RobotAdapter>> adapters_;
    std::vector<RobotAdapter*> adapterPtrs_;
    std::vector<ExecutionContext> contexts_;
};

}  // namespace smforge::sim
