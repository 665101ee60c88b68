#pragma once

/// @file compiled.hpp
/// @brief Flattened, index-addressed executable form of a state machine.

#include "smforge/program.hpp"
#include "smforge/value.hpp"

#include <optional>
#include <string>
#include <vector>

namespace smforge {

struct StateEntry {
    std::string name;
    std::optional<Program> entry;
    std::optional<Program> during;
    std::optional<Program> exit;
    bool isFinal = false;

    bool operator==(const StateEntry&) const = default;
};

struct TransitionEntry {
    std::size_t source = 0;
    std::size_t target = 0;
    std::optional<std::size_t> event;
    std::optional<Program> guard;
    std::optional<Program> action;

    bool operator==(const TransitionEntry&) const = default;
};

/// States and transitions of a machine or of an operation body. Transitions
/// keep their textual order.
struct MachineBody {
    std::vector<StateEntry> states;
    std::size_t initial = 0;
    std::vector<TransitionEntry> transitions;

    bool operator==(const MachineBody&) const = default;
};

struct ParamEntry {
    std::string name;
    TypeKind type = TypeKind::Real;

    bool operator==(const ParamEntry&) const = default;
};

struct OpSignature {
    std::string name;
    std::vector<ParamEntry> params;

    bool operator==(const OpSignature&) const = default;
};

/// Platform-bound operation, optionally with a contract.
struct ExternalOp {
    OpSignature sig;
    std::optional<Program> pre;
    std::optional<Program> post;

    bool operator==(const ExternalOp&) const = default;
};

/// Operation with a state-machine body, run to a final state in zero time.
/// Body programs address the host machine's variable, event and clock tables.
struct DefinedOp {
    OpSignature sig;
    std::optional<Program> pre;
    std::optional<Program> post;
    MachineBody body;

    bool operator==(const DefinedOp&) const = default;
};

struct VarEntry {
    std::string name;
    TypeKind type = TypeKind::Real;
    Value init{false};

    bool operator==(const VarEntry&) const = default;
};

struct CompiledMachine {
    std::string name;
    MachineBody body;
    std::vector<std::string> events;
    std::vector<VarEntry> vars;
    std::vector<std::string> clocks;
    std::vector<ExternalOp> externalOps;
    std::vector<DefinedOp> definedOps;

    bool operator==(const CompiledMachine&) const = default;

    std::optional<std::size_t> stateIndex(std::string_view n) const;
    std::optional<std::size_t> eventIndex(std::string_view n) const;
    std::optional<std::size_t> varIndex(std::string_view n) const;
    std::optional<std::size_t> clockIndex(std::string_view n) const;
    std::optional<std::size_t> externalIndex(std::string_view n) const;
    std::optional<std::size_t> definedIndex(std::string_view n) const;

    /// Checks every table invariant (indices in range, stack balance, one
    /// initial state, final states inert). Throws std::invalid_argument.
    void validate() const;
};

}  // namespace smforge
