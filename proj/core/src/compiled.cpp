#include "smforge/compiled.hpp"

#include <stdexcept>

namespace smforge {

namespace {

template <typename T, typename Name>
std::optional<std::size_t> find(const std::vector<T>& items, std::string_view n, Name name) {
    for (std::size_t i = 0; i < items.size(); ++i)
        if (name(items[i]) == n) return i;
    return std::nullopt;
}

[[noreturn]] void invalid(const std::string& what) {
    throw std::invalid_argument("invalid compiled machine: " + what);
}

void checkProgram(const std::optional<Program>& p, ProgramKind kind, const ProgramLimits& limits,
                  const std::string& where) {
    if (!p) return;
    if (p->code.empty()) invalid(where + ": empty program must be absent");
    if (auto err = verifyProgram(*p, kind, limits)) invalid(where + ": " + *err);
}

void checkBody(const MachineBody& body, const CompiledMachine& m, const ProgramLimits& limits,
               const std::string& where) {
    if (body.states.empty()) invalid(where + ": no states");
    if (body.initial >= body.states.size()) invalid(where + ": initial state out of range");
    for (const auto& s : body.states) {
        const auto at = where + " state '" + s.name + "'";
        checkProgram(s.entry, ProgramKind::Action, limits, at + " entry");
        checkProgram(s.during, ProgramKind::Action, limits, at + " during");
        checkProgram(s.exit, ProgramKind::Action, limits, at + " exit");
        if (s.isFinal && (s.during || s.exit)) invalid(at + ": final state with during/exit program");
    }
    for (std::size_t i = 0; i < body.transitions.size(); ++i) {
        const auto& t = body.transitions[i];
        const auto at = where + " transition " + std::to_string(i);
        if (t.source >= body.states.size() || t.target >= body.states.size()) invalid(at + ": state out of range");
        if (body.states[t.source].isFinal) invalid(at + ": leaves a final state");
        if (t.event && *t.event >= m.events.size()) invalid(at + ": event out of range");
        checkProgram(t.guard, ProgramKind::Expression, limits, at + " guard");
        checkProgram(t.action, ProgramKind::Action, limits, at + " action");
    }
}

}  // namespace

std::optional<std::size_t> CompiledMachine::stateIndex(std::string_view n) const {
    return find(body.states, n, [](const StateEntry& s) -> const std::string& { return s.name; });
}
std::optional<std::size_t> CompiledMachine::eventIndex(std::string_view n) const {
    return find(events, n, [](const std::string& s) -> const std::string& { return s; });
}
std::optional<std::size_t> CompiledMachine::varIndex(std::string_view n) const {
    return find(vars, n, [](const VarEntry& v) -> const std::string& { return v.name; });
}
std::optional<std::size_t> CompiledMachine::clockIndex(std::string_view n) const {
    return find(clocks, n, [](const std::string& s) -> const std::string& { return s; });
}
std::optional<std::size_t> CompiledMachine::externalIndex(std::string_view n) const {
    return find(externalOps, n, [](const ExternalOp& o) -> const std::string& { return o.sig.name; });
}
std::optional<std::size_t> CompiledMachine::definedIndex(std::string_view n) const {
    return find(definedOps, n, [](const DefinedOp& o) -> const std::string& { return o.sig.name; });
}

void CompiledMachine::validate() const {
    std::vector<std::size_t> extArity;
    std::vector<std::size_t> defArity;
    for (const auto& op : externalOps) extArity.push_back(op.sig.params.size());
    for (const auto& op : definedOps) defArity.push_back(op.sig.params.size());

    for (const auto& v : vars)
        if (typeOf(v.init) != v.type) invalid("variable '" + v.name + "' initial value has the wrong type");

    ProgramLimits limits{vars.size(), 0, clocks.size(), extArity, defArity};
    checkBody(body, *this, limits, "machine '" + name + "'");

    auto checkContract = [&](const OpSignature& sig, const std::optional<Program>& pre,
                             const std::optional<Program>& post) {
        ProgramLimits opLimits{vars.size(), sig.params.size(), clocks.size(), extArity, defArity};
        checkProgram(pre, ProgramKind::Expression, opLimits, "operation '" + sig.name + "' pre");
        checkProgram(post, ProgramKind::Expression, opLimits, "operation '" + sig.name + "' post");
        return opLimits;
    };
    for (const auto& op : externalOps) checkContract(op.sig, op.pre, op.post);
    for (const auto& op : definedOps) {
        auto opLimits = checkContract(op.sig, op.pre, op.post);
        checkBody(op.body, *this, opLimits, "operation '" + op.sig.name + "'");
        bool anyFinal = false;
        for (const auto& s : op.body.states) anyFinal = anyFinal || s.isFinal;
        if (!anyFinal) invalid("operation '" + op.sig.name + "' body has no final state");
    }
}

}  // namespace smforge
