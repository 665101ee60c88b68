#pragma once

/// @file runtime.hpp
/// @brief Cycle-based interpreter for compiled machines.
///
/// One step is one control cycle:
///   1. the platform publishes this cycle's events (plus any injected ones);
///   2. on the very first step the initial state's entry program runs;
///   3. the first enabled outgoing transition (table order) fires: exit,
///      action, state change and target entry all run in this cycle;
///   4. otherwise the current state's during program runs;
///   5. the cycle counter and every clock advance by one.
/// Operation calls take no simulated time.

#include "smforge/compiled.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace smforge {

struct RuntimeConfig {
    /// Time units per control cycle: since(T) = counter * timeUnit.
    double timeUnit = 1.0;
    /// Report postcondition violations as trace warnings instead of faulting.
    bool postconditionWarnings = false;
    /// Internal steps one operation body may take before faulting.
    std::size_t stepBudget = 10000;
    /// Variables copied into every trace record.
    std::vector<std::string> watch;
};

enum class FaultKind { PreconditionViolation, PostconditionViolation, StepBudgetExceeded, Arithmetic };

std::string_view faultName(FaultKind kind);

struct Fault {
    FaultKind kind;
    std::string detail;  // operation name or arithmetic description

    std::string describe() const;
};

struct OpCallRecord {
    std::string name;
    std::vector<Value> args;

    bool operator==(const OpCallRecord&) const = default;
};

struct TraceRecord {
    std::uint64_t cycle = 0;
    std::string stateBefore;
    std::vector<std::string> events;
    std::optional<std::size_t> fired;
    std::string stateAfter;
    std::vector<OpCallRecord> ops;  // nested calls included, in call order
    std::vector<std::pair<std::string, Value>> watch;
    std::optional<std::string> fault;
    std::vector<std::string> warnings;

    bool operator==(const TraceRecord&) const = default;
};

struct VarWrite {
    std::size_t slot;
    Value value;
};

/// An external operation call as seen by the platform.
struct ExternalCall {
    const CompiledMachine& machine;
    std::size_t index;
    std::span<const Value> args;
    std::span<const Value> vars;
};

/// Simulator- or test-side realization of a machine's external operations and
/// event production. Called only from the owning context's thread.
class PlatformBinding {
public:
    virtual ~PlatformBinding() = default;

    virtual bool binds(std::string_view op) const = 0;
    /// Sets flags[i] for every event raised this cycle; flags arrive cleared.
    virtual void publishEvents(const CompiledMachine& machine, std::span<const Value> vars, std::vector<bool>& flags) = 0;
    virtual std::vector<VarWrite> invoke(const ExternalCall& call) = 0;
};

/// Binds every operation as a no-op and raises no events.
class NullPlatform final : public PlatformBinding {
public:
    bool binds(std::string_view) const override { return true; }
    void publishEvents(const CompiledMachine&, std::span<const Value>, std::vector<bool>&) override {}
    std::vector<VarWrite> invoke(const ExternalCall&) override { return {}; }
};

class RuntimeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Status { Running, Finished, Faulted };

class ExecutionContext {
public:
    const CompiledMachine& machine() const { return *machine_; }
    const RuntimeConfig& config() const { return config_; }
    Status status() const { return status_; }
    const std::optional<Fault>& fault() const { return fault_; }
    std::uint64_t cycle() const { return cycle_; }
    std::size_t currentState() const { return state_; }
    std::span<const Value> vars() const { return vars_; }
    std::span<const std::uint64_t> clockCounters() const { return clocks_; }

    /// Value of a named variable; throws std::out_of_range if unknown.
    const Value& var(std::string_view name) const;
    /// Overwrites a slot; the value must have the slot's type.
    void setVar(std::size_t slot, Value v);

    /// Runs one cycle. `injected` events are raised in addition to the
    /// platform's. Throws RuntimeError unless status() is Running.
    TraceRecord step(std::span<const std::size_t> injected = {});

private:
    friend ExecutionContext createContext(const CompiledMachine&, PlatformBinding&, RuntimeConfig);
    struct Interp;

    ExecutionContext(const CompiledMachine& m, PlatformBinding& p, RuntimeConfig c);

    const CompiledMachine* machine_;
    PlatformBinding* platform_;
    RuntimeConfig config_;
    std::vector<std::size_t> watchSlots_;
    std::size_t state_ = 0;
    std::vector<Value> vars_;
    std::vector<std::uint64_t> clocks_;
    std::vector<bool> flags_;
    std::uint64_t cycle_ = 0;
    bool entryPending_ = true;
    Status status_ = Status::Running;
    std::optional<Fault> fault_;
};

/// Throws RuntimeError naming every unbound external operation, or when
/// config.timeUnit is not positive or a watched variable does not exist.
ExecutionContext createContext(const CompiledMachine& machine, PlatformBinding& platform, RuntimeConfig config = {});

/// Per-cycle event names; cycles past the end raise nothing.
struct EventScript {
    std::vector<std::vector<std::string>> cycles;
};

/// Steps until the context finishes or faults or maxCycles records exist. Throws RuntimeError for an event name the machine
/// does not declare.
std::vector<TraceRecord> runScript(ExecutionContext& ctx, const EventScript& script, std::uint64_t maxCycles);

}  // namespace smforge
