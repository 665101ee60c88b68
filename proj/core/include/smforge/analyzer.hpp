#pragma once

/// @file analyzer.hpp
/// @brief Name resolution, type checking and well-formedness checks.
///
/// Diagnostic codes:
///   E01 unresolved name            E07 call arity/type mismatch
///   E02 type mismatch              E08 assignment to undeclared variable
///   E03 guard not boolean          E09 duplicate or ambiguous declaration
///   E04 unknown state/event        E10 operation body cannot reach a final state
///   E05 undeclared clock           E11 contract references an out-of-scope name
///   E06 unknown required interface
///   W01 unreachable state   W02 unused event   W03 operation never called

#include "smforge/ast.hpp"
#include "smforge/diagnostic.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace smforge {

struct VarSymbol {
    std::string name;
    std::string owner;  // machine or interface name
    TypeKind type = TypeKind::Real;
    std::optional<Value> init;
};

struct EventSymbol {
    std::string name;
    std::string owner;
};

struct OpSymbol {
    std::string name;
    std::vector<ast::Param> params;
    std::string declaredIn;            // interface declaring the signature, empty if none
    std::optional<std::size_t> defIndex;  // index into ModelUnit::operations
};

/// Everything visible from one machine, in slot order.
struct MachineScope {
    std::string machine;
    std::vector<VarSymbol> variables;  // machine locals, then required interfaces in order
    std::vector<EventSymbol> events;
    std::vector<OpSymbol> operations;  // interface operations, then owner-less definitions
    std::vector<std::string> clocks;
    std::map<std::string, std::size_t, std::less<>> stateIndex;

    const VarSymbol* findVar(std::string_view name) const;
    const OpSymbol* findOp(std::string_view name) const;
    std::optional<std::size_t> varIndex(std::string_view name) const;
    std::optional<std::size_t> eventIndex(std::string_view name) const;
    std::optional<std::size_t> opIndex(std::string_view name) const;
    std::optional<std::size_t> clockIndex(std::string_view name) const;
};

/// A type-annotated ModelUnit plus its symbol tables. Immutable once built.
struct ResolvedModel {
    ast::ModelUnit unit;
    std::vector<MachineScope> machines;  // parallel to unit.machines

    const MachineScope* findScope(std::string_view machine) const;
    /// Interfaces whose signature list names operation `op`.
    std::vector<const ast::InterfaceDecl*> ownersOf(std::string_view op) const;
};

struct AnalysisResult {
    std::optional<ResolvedModel> model;  // set iff no error diagnostics
    std::vector<Diagnostic> diagnostics;  // sorted, warnings included

    bool ok() const { return model.has_value(); }
};

/// Reports every problem in one pass.
AnalysisResult analyze(const ast::ModelUnit& unit);

/// Graph reachability of operation bodies (E10) and contract scoping (E11).
std::vector<Diagnostic> checkOperationContracts(const ResolvedModel& model);

/// Int values may flow into real slots; everything else must match exactly.
bool assignable(TypeKind from, TypeKind to);

struct CheckResult {
    std::optional<ResolvedModel> model;  // set iff neither pass reported an error
    std::vector<Diagnostic> diagnostics;
};

/// parse + analyze + checkOperationContracts, diagnostics merged and sorted.
CheckResult checkSource(std::string_view source, std::string_view file);

}  // namespace smforge
