#include "smforge/sim/simulation.hpp"

namespace smforge::sim {

std::vector<TraceRecord> stepWorld(World& world, std::span<ExecutionContext> contexts,
                                   std::span<RobotAdapter* const> adapters) {
    const auto n = world.robots.size();
    if (contexts.size() != n || adapters.size() != n)
        throw std::invalid_argument("stepWorld needs one context and one adapter per robot");
    const auto substeps = world.substeps();

    for (std::size_t i = 0; i < n; ++i) adapters[i]->sense(world, i);

    std::vector<TraceRecord> records;
    records.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        records.push_back(contexts[i].step());
        if (contexts[i].status() == Status::Faulted) throw SimulationFault(i, contexts[i].fault()->describe());
    }

    for (std::size_t i = 0; i < n; ++i) world.robots[i].setWheels(adapters[i]->actuate(records[i], world.robots[i]));

    for (std::size_t s = 0; s < substeps; ++s) physicsStep(world);
    world.clockS += world.controlDt;
    return records;
}

Simulation::Simulation(World world, std::shared_ptr<const CompiledMachine> machine, const AdapterFactory& makeAdapter,
                       RuntimeConfig config)
    : world_(std::move(world)), machine_(std::move(machine)) {
    world_.substeps();
    for (std::size_t i = 0; i < world_.robots.size(); ++i) {
        adapters_.push_back(makeAdapter());
        adapterPtrs_.push_back(adapters_.back().get());
        contexts_.push_back(createContext(*machine_, *adapters_.back(), config));
    }
}

std::vector<TraceRecord> Simulation::step() {
    return stepWorld(world_, contexts_, adapterPtrs_);
}

}  // namespace smforge::sim
