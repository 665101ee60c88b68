#include "smforge/analyzer.hpp"

#include "smforge/parser.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <set>

namespace smforge {

// --- MachineScope / ResolvedModel lookups -----------------------------------

namespace {

template <typename T, typename Name>
std::optional<std::size_t> indexByName(const std::vector<T>& items, std::string_view name, Name nameOf) {
    for (std::size_t i = 0; i < items.size(); ++i)
        if (nameOf(items[i]) == name) return i;
    return std::nullopt;
}

}  // namespace

std::optional<std::size_t> MachineScope::varIndex(std::string_view name) const {
    return indexByName(variables, name, [](const VarSymbol& v) -> const std::string& { return v.name; });
}
std::optional<std::size_t> MachineScope::eventIndex(std::string_view name) const {
    return indexByName(events, name, [](const EventSymbol& e) -> const std::string& { return e.name; });
}
std::optional<std::size_t> MachineScope::opIndex(std::string_view name) const {
    return indexByName(operations, name, [](const OpSymbol& o) -> const std::string& { return o.name; });
}
std::optional<std::size_t> MachineScope::clockIndex(std::string_view name) const {
    return indexByName(clocks, name, [](const std::string& c) -> const std::string& { return c; });
}
const VarSymbol* MachineScope::findVar(std::string_view name) const {
    auto i = varIndex(name);
    return i ? &variables[*i] : nullptr;
}
const OpSymbol* MachineScope::findOp(std::string_view name) const {
    auto i = opIndex(name);
    return i ? &operations[*i] : nullptr;
}

const MachineScope* ResolvedModel::findScope(std::string_view machine) const {
    for (const auto& s : machines)
        if (s.machine == machine) return &s;
    return nullptr;
}

std::vector<const ast::InterfaceDecl*> ResolvedModel::ownersOf(std::string_view op) const {
    std::vector<const ast::InterfaceDecl*> out;
    for (const auto& iface : unit.interfaces)
        for (const auto& sig : iface.operations)
            if (sig.name == op) out.push_back(&iface);
    return out;
}

bool assignable(TypeKind from, TypeKind to) {
    return from == to || (from == TypeKind::Int && to == TypeKind::Real);
}

namespace {

using namespace ast;

bool isNumeric(TypeKind t) { return t == TypeKind::Int || t == TypeKind::Real; }

/// Names visible while checking one expression or action sequence.
struct Scope {
    std::string context;  // for messages
    std::vector<Param> params;
    std::map<std::string, TypeKind, std::less<>> vars;
    std::set<std::string, std::less<>> events;
    std::map<std::string, const OpSymbol*, std::less<>> ops;
    std::set<std::string, std::less<>> clocks;
    /// Contract-only: variables outside the operation's own scope (E11 later).
    std::map<std::string, TypeKind, std::less<>> fallbackVars;

    std::optional<TypeKind> param(std::string_view name) const {
        for (const auto& p : params)
            if (p.name == name) return p.type;
        return std::nullopt;
    }
};

class Analyzer {
public:
    explicit Analyzer(const ModelUnit& unit) { model_.unit = unit; }

    AnalysisResult run() {
        auto& unit = model_.unit;
        checkDuplicateDecls();
        buildGlobalOps();
        collectUsage();

        for (auto& iface : unit.interfaces) checkInterface(iface);
        for (auto& m : unit.machines) model_.machines.push_back(checkMachine(m));
        for (std::size_t i = 0; i < unit.operations.size(); ++i) checkOperation(unit.operations[i]);
        for (const auto& mod : unit.modules) checkModule(mod);
        reportUnused();

        AnalysisResult result;
        sortDiagnostics(diags_);
        result.diagnostics = std::move(diags_);
        if (!hasErrors(result.diagnostics)) result.model = std::move(model_);
        return result;
    }

private:
    void error(const char* code, const SourceSpan& span, std::string message) {
        diags_.push_back({code, Severity::Error, span, std::move(message)});
    }
    void warning(const char* code, const SourceSpan& span, std::string message) {
        diags_.push_back({code, Severity::Warning, span, std::move(message)});
    }

    // --- global tables ---------------------------------------------------------

    void checkDuplicateDecls() {
        const auto& unit = model_.unit;
        auto dup = [&](auto const& items, const char* what) {
            std::set<std::string> seen;
            for (const auto& item : items)
                if (!seen.insert(item.name).second)
                    error("E09", item.span, std::string("duplicate ") + what + " '" + item.name + "'");
        };
        dup(unit.interfaces, "interface");
        dup(unit.machines, "machine");
        dup(unit.operations, "operation definition");
        dup(unit.modules, "module");
    }

    void buildGlobalOps() {
        const auto& unit = model_.unit;
        for (const auto& iface : unit.interfaces) {
            for (const auto& sig : iface.operations) {
                OpSymbol op{sig.name, sig.params, iface.name, std::nullopt};
                for (std::size_t d = 0; d < unit.operations.size(); ++d)
                    if (unit.operations[d].name == sig.name) op.defIndex = d;
                interfaceOps_[iface.name].push_back(op);
            }
        }
        for (std::size_t d = 0; d < unit.operations.size(); ++d) {
            const auto& def = unit.operations[d];
            bool owned = !model_.ownersOf(def.name).empty();
            if (!owned) ownerlessOps_.push_back({def.name, def.params, "", d});
        }
    }

    void collectUsage() {
        std::function<void(const ActionSeq&)> actions = [&](const ActionSeq& seq) {
            for (const auto& a : seq)
                if (a.kind == ActionKind::Call) calledOps_.insert(a.name);
        };
        auto machine = [&](const MachineDecl& m) {
            for (const auto& s : m.states) {
                if (s.entry) actions(*s.entry);
                if (s.during) actions(*s.during);
                if (s.exit) actions(*s.exit);
            }
            for (const auto& t : m.transitions) {
                if (t.trigger) usedEvents_.insert(t.trigger->name);
                if (t.action) actions(*t.action);
            }
        };
        for (const auto& m : model_.unit.machines) machine(m);
        for (const auto& op : model_.unit.operations)
            if (op.body) machine(*op.body);
    }

    // --- interfaces --------------------------------------------------------------

    void checkVarInit(const VarDecl& v) {
        if (v.init && !assignable(typeOf(*v.init), v.type))
            error("E02", v.span,
                  "initial value of '" + v.name + "' has type " + std::string(typeName(typeOf(*v.init))) +
                      ", expected " + std::string(typeName(v.type)));
    }

    void checkInterface(const InterfaceDecl& iface) {
        for (const auto& v : iface.variables) checkVarInit(v);
        for (const auto& sig : iface.operations) {
            std::set<std::string> seen;
            for (const auto& p : sig.params)
                if (!seen.insert(p.name).second) error("E09", p.span, "duplicate parameter '" + p.name + "'");
        }
    }

    // --- machines ----------------------------------------------------------------

    MachineScope checkMachine(MachineDecl& m) {
        MachineScope scope;
        scope.machine = m.name;
        const auto& unit = model_.unit;

        std::set<std::string> localNames;
        for (const auto& c : m.clocks) {
            if (!localNames.insert(c.name).second) error("E09", c.span, "duplicate declaration '" + c.name + "'");
            scope.clocks.push_back(c.name);
        }
        for (const auto& v : m.variables) {
            checkVarInit(v);
            if (!localNames.insert(v.name).second) error("E09", v.span, "duplicate declaration '" + v.name + "'");
            scope.variables.push_back({v.name, m.name, v.type, v.init});
        }

        std::set<std::string> requiredSeen;
        std::map<std::string, std::string> memberOwner;  // interface member -> interface
        for (const auto& req : m.required) {
            const auto* iface = unit.findInterface(req.name);
            if (!iface) {
                error("E06", req.span, "machine '" + m.name + "' requires unknown interface '" + req.name + "'");
                continue;
            }
            if (!requiredSeen.insert(req.name).second) {
                error("E09", req.span, "interface '" + req.name + "' required twice");
                continue;
            }
            auto claim = [&](const std::string& name) {
                auto [it, fresh] = memberOwner.emplace(name, iface->name);
                if (!fresh && it->second != iface->name) {
                    error("E09", req.span,
                          "'" + name + "' is declared by both '" + it->second + "' and '" + iface->name + "'");
                    return false;
                }
                return true;
            };
            for (const auto& v : iface->variables) {
                if (!claim(v.name) || localNames.count(v.name)) continue;
                scope.variables.push_back({v.name, iface->name, v.type, v.init});
            }
            for (const auto& e : iface->events)
                if (claim(e.name)) scope.events.push_back({e.name, iface->name});
            for (const auto& op : interfaceOps_[iface->name])
                if (claim(op.name)) scope.operations.push_back(op);
        }
        for (const auto& op : ownerlessOps_)
            if (!scope.findOp(op.name)) scope.operations.push_back(op);

        for (std::size_t i = 0; i < m.states.size(); ++i) {
            if (!scope.stateIndex.emplace(m.states[i].name, i).second)
                error("E09", m.states[i].span, "duplicate state '" + m.states[i].name + "'");
        }

        Scope s;
        s.context = "machine '" + m.name + "'";
        for (const auto& v : scope.variables) s.vars.emplace(v.name, v.type);
        for (const auto& e : scope.events) s.events.insert(e.name);
        for (const auto& op : scope.operations) s.ops.emplace(op.name, &op);
        for (const auto& c : scope.clocks) s.clocks.insert(c);
        checkBehaviour(m, s, &scope);
        reportUnreachable(m);
        return scope;
    }

    /// States, transitions and actions of a machine or operation body.
    void checkBehaviour(MachineDecl& m, const Scope& scope, const MachineScope* machineScope) {
        std::set<std::string> stateNames;
        for (const auto& st : m.states) stateNames.insert(st.name);
        if (!machineScope) {
            std::set<std::string> seen;
            for (const auto& st : m.states)
                if (!seen.insert(st.name).second) error("E09", st.span, "duplicate state '" + st.name + "'");
        }
        for (auto& st : m.states) {
            if (st.entry) checkActions(*st.entry, scope);
            if (st.during) checkActions(*st.during, scope);
            if (st.exit) checkActions(*st.exit, scope);
        }
        for (auto& t : m.transitions) {
            if (!stateNames.count(t.source.name))
                error("E04", t.source.span, "transition references unknown state '" + t.source.name + "'");
            if (!stateNames.count(t.target.name))
                error("E04", t.target.span, "transition references unknown state '" + t.target.name + "'");
            if (t.trigger && !scope.events.count(t.trigger->name))
                error("E04", t.trigger->span, "transition references unknown event '" + t.trigger->name + "'");
            if (t.guard) {
                auto type = checkExpr(*t.guard, scope);
                if (type && *type != TypeKind::Boolean)
                    error("E03", t.guard->span,
                          "guard has type " + std::string(typeName(*type)) + ", expected boolean");
            }
            if (t.action) checkActions(*t.action, scope);
        }
    }

    void reportUnreachable(const MachineDecl& m) {
        std::set<std::string> seen{m.initial};
        std::deque<std::string> queue{m.initial};
        while (!queue.empty()) {
            auto cur = queue.front();
            queue.pop_front();
            for (const auto& t : m.transitions)
                if (t.source.name == cur && seen.insert(t.target.name).second) queue.push_back(t.target.name);
        }
        for (const auto& st : m.states)
            if (!seen.count(st.name))
                warning("W01", st.span, "state '" + st.name + "' is unreachable from '" + m.initial + "'");
    }

    // --- operations ----------------------------------------------------------------

    Scope operationScope(const OperationDef& op, bool contract) {
        Scope s;
        s.context = "operation '" + op.name + "'";
        s.params = op.params;
        auto owners = model_.ownersOf(op.name);
        for (const auto* iface : owners) {
            for (const auto& v : iface->variables) s.vars.emplace(v.name, v.type);
            for (const auto& e : iface->events) s.events.insert(e.name);
            for (const auto& o : interfaceOps_[iface->name]) s.ops.emplace(o.name, &o);
        }
        for (const auto& o : ownerlessOps_) s.ops.emplace(o.name, &o);
        if (contract) {
            std::map<std::string, std::set<TypeKind>> candidates;
            for (const auto& iface : model_.unit.interfaces)
                for (const auto& v : iface.variables) candidates[v.name].insert(v.type);
            for (const auto& mach : model_.unit.machines)
                for (const auto& v : mach.variables) candidates[v.name].insert(v.type);
            for (const auto& [name, types] : candidates)
                if (types.size() == 1 && !s.vars.count(name)) s.fallbackVars.emplace(name, *types.begin());
        }
        return s;
    }

    void checkOperation(OperationDef& op) {
        std::set<std::string> seen;
        for (const auto& p : op.params)
            if (!seen.insert(p.name).second) error("E09", p.span, "duplicate parameter '" + p.name + "'");

        for (const auto* iface : model_.ownersOf(op.name)) {
            for (const auto& sig : iface->operations) {
                if (sig.name != op.name) continue;
                bool same = sig.params.size() == op.params.size() &&
                            std::equal(sig.params.begin(), sig.params.end(), op.params.begin(),
                                       [](const Param& a, const Param& b) { return a.type == b.type; });
                if (!same)
                    error("E07", op.span,
                          "definition of '" + op.name + "' does not match its signature in '" + iface->name + "'");
            }
        }

        auto contractScope = operationScope(op, true);
        for (auto* cond : {op.pre ? &*op.pre : nullptr, op.post ? &*op.post : nullptr}) {
            if (!cond) continue;
            auto type = checkExpr(*cond, contractScope);
            if (type && *type != TypeKind::Boolean)
                error("E02", cond->span, "contract has type " + std::string(typeName(*type)) + ", expected boolean");
        }
        if (op.body) {
            auto bodyScope = operationScope(op, false);
            checkBehaviour(*op.body, bodyScope, nullptr);
        }
    }

    void checkModule(const ModuleDecl& mod) {
        for (const auto& c : mod.controllers)
            if (!model_.unit.findMachine(c.name))
                error("E01", c.span, "module '" + mod.name + "' names unknown controller '" + c.name + "'");
    }

    void reportUnused() {
        for (const auto& iface : model_.unit.interfaces) {
            for (const auto& e : iface.events)
                if (!usedEvents_.count(e.name))
                    warning("W02", e.span, "event '" + e.name + "' is never used as a trigger");
            for (const auto& sig : iface.operations)
                if (!calledOps_.count(sig.name))
                    warning("W03", sig.span, "operation '" + sig.name + "' is never called");
        }
        for (const auto& op : ownerlessOps_) {
            const auto& def = model_.unit.operations[*op.defIndex];
            if (!calledOps_.count(def.name))
                warning("W03", def.span, "operation '" + def.name + "' is never called");
        }
    }

    // --- actions and expressions -------------------------------------------------

    void checkActions(ActionSeq& seq, const Scope& scope) {
        for (auto& a : seq) {
            switch (a.kind) {
                case ActionKind::ClockReset:
                    if (!scope.clocks.count(a.name))
                        error("E05", a.span, "reset of undeclared clock '" + a.name + "'");
                    break;
                case ActionKind::Assign: {
                    auto valueType = checkExpr(a.args[0], scope);
                    auto it = scope.vars.find(a.name);
                    if (it == scope.vars.end()) {
                        if (scope.param(a.name))
                            error("E08", a.span, "cannot assign to parameter '" + a.name + "'");
                        else
                            error("E08", a.span, "assignment to undeclared variable '" + a.name + "'");
                    } else if (valueType && !assignable(*valueType, it->second)) {
                        error("E02", a.span,
                              "cannot assign " + std::string(typeName(*valueType)) + " to '" + a.name + "' of type " +
                                  std::string(typeName(it->second)));
                    }
                    break;
                }
                case ActionKind::Call: checkCall(a, scope); break;
            }
        }
    }

    void checkCall(Action& a, const Scope& scope) {
        std::vector<std::optional<TypeKind>> argTypes;
        for (auto& arg : a.args) argTypes.push_back(checkExpr(arg, scope));
        auto it = scope.ops.find(a.name);
        if (it == scope.ops.end()) {
            error("E01", a.span, "unresolved operation '" + a.name + "' in " + scope.context);
            return;
        }
        const OpSymbol& op = *it->second;
        if (op.params.size() != a.args.size()) {
            error("E07", a.span,
                  "'" + a.name + "' expects " + std::to_string(op.params.size()) + " argument(s), got " +
                      std::to_string(a.args.size()));
            return;
        }
        for (std::size_t i = 0; i < argTypes.size(); ++i) {
            if (argTypes[i] && !assignable(*argTypes[i], op.params[i].type))
                error("E07", a.args[i].span,
                      "argument " + std::to_string(i + 1) + " of '" + a.name + "' has type " +
                          std::string(typeName(*argTypes[i])) + ", expected " +
                          std::string(typeName(op.params[i].type)));
        }
    }

    std::optional<TypeKind> mismatch(const Expr& e, const std::string& what) {
        error("E02", e.span, what);
        return std::nullopt;
    }

    std::optional<TypeKind> checkExpr(Expr& e, const Scope& scope) {
        e.type = inferExpr(e, scope);
        return e.type;
    }

    std::optional<TypeKind> inferExpr(Expr& e, const Scope& scope) {
        switch (e.kind) {
            case ExprKind::Literal: return typeOf(e.literal);
            case ExprKind::VarRef: {
                if (auto p = scope.param(e.name)) return p;
                if (auto it = scope.vars.find(e.name); it != scope.vars.end()) return it->second;
                if (auto it = scope.fallbackVars.find(e.name); it != scope.fallbackVars.end()) return it->second;
                error("E01", e.span, "unresolved name '" + e.name + "' in " + scope.context);
                return std::nullopt;
            }
            case ExprKind::Since:
                if (!scope.clocks.count(e.name)) {
                    error("E05", e.span, "since() on undeclared clock '" + e.name + "'");
                    return std::nullopt;
                }
                return TypeKind::Real;
            case ExprKind::Vector: {
                auto x = checkExpr(e.operands[0], scope);
                auto y = checkExpr(e.operands[1], scope);
                if (!x || !y) return std::nullopt;
                if (!isNumeric(*x) || !isNumeric(*y)) return mismatch(e, "vector components must be numeric");
                return TypeKind::Vector2d;
            }
            case ExprKind::Unary: {
                auto t = checkExpr(e.operands[0], scope);
                if (!t) return std::nullopt;
                if (e.unary == UnaryOp::Not) {
                    if (*t != TypeKind::Boolean) return mismatch(e, "'not' needs a boolean operand");
                    return TypeKind::Boolean;
                }
                if (*t == TypeKind::Boolean) return mismatch(e, "cannot negate a boolean");
                return t;
            }
            case ExprKind::Conditional: {
                auto c = checkExpr(e.operands[0], scope);
                auto a = checkExpr(e.operands[1], scope);
                auto b = checkExpr(e.operands[2], scope);
                if (c && *c != TypeKind::Boolean) mismatch(e.operands[0], "condition must be boolean");
                if (!a || !b || (c && *c != TypeKind::Boolean)) return std::nullopt;
                if (*a == *b) return a;
                if (isNumeric(*a) && isNumeric(*b)) return TypeKind::Real;
                return mismatch(e, "branches have types " + std::string(typeName(*a)) + " and " +
                                       std::string(typeName(*b)));
            }
            case ExprKind::Binary: return inferBinary(e, scope);
        }
        return std::nullopt;
    }

    std::optional<TypeKind> inferBinary(Expr& e, const Scope& scope) {
        auto l = checkExpr(e.operands[0], scope);
        auto r = checkExpr(e.operands[1], scope);
        if (!l || !r) return std::nullopt;
        const auto op = std::string(spelling(e.binary));
        auto bad = [&] {
            return mismatch(e, "operator '" + op + "' cannot combine " + std::string(typeName(*l)) + " and " +
                                   std::string(typeName(*r)));
        };
        const bool numeric = isNumeric(*l) && isNumeric(*r);
        const auto arith = (*l == TypeKind::Int && *r == TypeKind::Int) ? TypeKind::Int : TypeKind::Real;
        switch (e.binary) {
            case BinaryOp::And:
            case BinaryOp::Or:
                if (*l != TypeKind::Boolean || *r != TypeKind::Boolean) return bad();
                return TypeKind::Boolean;
            case BinaryOp::Eq:
            case BinaryOp::Ne:
                if (*l != *r && !numeric) return bad();
                return TypeKind::Boolean;
            case BinaryOp::Lt:
            case BinaryOp::Le:
            case BinaryOp::Gt:
            case BinaryOp::Ge:
                if (!numeric) return bad();
                return TypeKind::Boolean;
            case BinaryOp::Add:
            case BinaryOp::Sub:
                if (numeric) return arith;
                if (*l == TypeKind::Vector2d && *r == TypeKind::Vector2d) return TypeKind::Vector2d;
                return bad();
            case BinaryOp::Mul:
                if (numeric) return arith;
                if ((*l == TypeKind::Vector2d && isNumeric(*r)) || (isNumeric(*l) && *r == TypeKind::Vector2d))
                    return TypeKind::Vector2d;
                return bad();
            case BinaryOp::Div:
                if (numeric) return arith;
                return bad();
        }
        return std::nullopt;
    }

    ResolvedModel model_;
    std::vector<Diagnostic> diags_;
    std::map<std::string, std::vector<OpSymbol>> interfaceOps_;
    std::vector<OpSymbol> ownerlessOps_;
    std::set<std::string> usedEvents_;
    std::set<std::string> calledOps_;
};

// --- contract pass ---------------------------------------------------------------

void collectNames(const Expr& e, std::vector<const Expr*>& out) {
    if (e.kind == ExprKind::VarRef) out.push_back(&e);
    for (const auto& o : e.operands) collectNames(o, out);
}

}  // namespace

AnalysisResult analyze(const ModelUnit& unit) {
    return Analyzer(unit).run();
}

std::vector<Diagnostic> checkOperationContracts(const ResolvedModel& model) {
    std::vector<Diagnostic> out;
    for (const auto& op : model.unit.operations) {
        std::set<std::string> inScope;
        for (const auto& p : op.params) inScope.insert(p.name);
        for (const auto* iface : model.ownersOf(op.name))
            for (const auto& v : iface->variables) inScope.insert(v.name);
        for (const auto* cond : {op.pre ? &*op.pre : nullptr, op.post ? &*op.post : nullptr}) {
            if (!cond) continue;
            std::vector<const Expr*> refs;
            collectNames(*cond, refs);
            for (const auto* ref : refs)
                if (!inScope.count(ref->name))
                    out.push_back({"E11", Severity::Error, ref->span,
                                   "contract of '" + op.name + "' references '" + ref->name +
                                       "', which is neither a parameter nor a variable of its interface"});
        }

        if (!op.body) continue;
        const auto& body = *op.body;
        auto successors = [&](const std::string& s) {
            std::vector<std::string> next;
            for (const auto& t : body.transitions)
                if (t.source.name == s) next.push_back(t.target.name);
            return next;
        };
        auto reachable = [&](const std::string& from) {
            std::set<std::string> seen{from};
            std::deque<std::string> queue{from};
            while (!queue.empty()) {
                auto cur = queue.front();
                queue.pop_front();
                for (const auto& n : successors(cur))
                    if (seen.insert(n).second) queue.push_back(n);
            }
            return seen;
        };
        for (const auto& s : reachable(body.initial)) {
            auto ahead = reachable(s);
            bool canFinish = std::any_of(ahead.begin(), ahead.end(), [&](const std::string& n) {
                const auto* st = body.findState(n);
                return st && st->isFinal;
            });
            if (!canFinish) {
                const auto* st = body.findState(s);
                out.push_back({"E10", Severity::Error, st ? st->span : body.span,
                               "operation '" + op.name + "' cannot reach a final state from '" + s + "'"});
            }
        }
    }
    sortDiagnostics(out);
    return out;
}

CheckResult checkSource(std::string_view source, std::string_view file) {
    CheckResult result;
    auto parsed = parse(source, file);
    if (!parsed.ok()) {
        result.diagnostics = std::move(parsed.diagnostics);
        return result;
    }
    auto analysis = analyze(*parsed.unit);
    result.diagnostics = std::move(analysis.diagnostics);
    if (!analysis.ok()) return result;
    auto contracts = checkOperationContracts(*analysis.model);
    const bool contractErrors = hasErrors(contracts);
    result.diagnostics.insert(result.diagnostics.end(), contracts.begin(), contracts.end());
    sortDiagnostics(result.diagnostics);
    if (!contractErrors) result.model = std::move(analysis.model);
    return result;
}

}  // namespace smforge
