#include "smforge/compiler.hpp"

#include <set>

namespace smforge {

namespace {

using namespace ast;

Value promote(const Value& v, TypeKind to) {
    if (to == TypeKind::Real && typeOf(v) == TypeKind::Int) return static_cast<double>(std::get<std::int64_t>(v));
    return v;
}

/// How operation calls resolve inside the machine being compiled.
struct OpSlot {
    bool external = true;
    std::size_t index = 0;
};

class MachineCompiler {
public:
    MachineCompiler(const ResolvedModel& model, const MachineScope& scope) : model_(model), scope_(scope) {}

    CompiledMachine run(const MachineDecl& decl) {
        out_.name = decl.name;
        for (const auto& v : scope_.variables)
            out_.vars.push_back({v.name, v.type, v.init ? promote(*v.init, v.type) : defaultValue(v.type)});
        for (const auto& e : scope_.events) out_.events.push_back(e.name);
        out_.clocks = scope_.clocks;

        // Interface operations are always part of the platform contract;
        // owner-less definitions only when something calls them.
        for (const auto& op : scope_.operations)
            if (!op.declaredIn.empty()) declareOp(op);
        collectCalls(decl);

        out_.body = compileBody(decl, nullptr);
        for (std::size_t i = 0; i < pendingDefined_.size(); ++i) {
            const auto& def = model_.unit.operations[pendingDefined_[i]];
            auto& slot = out_.definedOps[i];
            slot.pre = compileContract(def.pre, def);
            slot.post = compileContract(def.post, def);
            slot.body = compileBody(*def.body, &def);
        }
        for (std::size_t i = 0; i < pendingExternalDefs_.size(); ++i) {
            const auto& [extIndex, defIndex] = pendingExternalDefs_[i];
            const auto& def = model_.unit.operations[defIndex];
            out_.externalOps[extIndex].pre = compileContract(def.pre, def);
            out_.externalOps[extIndex].post = compileContract(def.post, def);
        }
        out_.validate();
        return std::move(out_);
    }

private:
    // --- operation tables ------------------------------------------------------

    void declareOp(const OpSymbol& op) {
        if (opSlots_.count(op.name)) return;
        OpSignature sig{op.name, {}};
        for (const auto& p : op.params) sig.params.push_back({p.name, p.type});
        const OperationDef* def = op.defIndex ? &model_.unit.operations[*op.defIndex] : nullptr;
        if (def && def->body) {
            opSlots_[op.name] = {false, out_.definedOps.size()};
            out_.definedOps.push_back({std::move(sig), std::nullopt, std::nullopt, {}});
            pendingDefined_.push_back(*op.defIndex);
            collectCalls(*def->body);
        } else {
            opSlots_[op.name] = {true, out_.externalOps.size()};
            if (def) pendingExternalDefs_.emplace_back(out_.externalOps.size(), *op.defIndex);
            out_.externalOps.push_back({std::move(sig), std::nullopt, std::nullopt});
        }
    }

    void collectCalls(const MachineDecl& m) {
        auto seq = [&](const std::optional<ActionSeq>& actions) {
            if (!actions) return;
            for (const auto& a : *actions) {
                if (a.kind != ActionKind::Call || opSlots_.count(a.name)) continue;
                const auto* op = scope_.findOp(a.name);
                if (!op) throw CompileError("machine '" + scope_.machine + "' cannot address operation '" + a.name + "'");
                declareOp(*op);
            }
        };
        for (const auto& s : m.states) {
            seq(s.entry);
            seq(s.during);
            seq(s.exit);
        }
        for (const auto& t : m.transitions) seq(t.action);
    }

    // --- bodies ------------------------------------------------------------------

    MachineBody compileBody(const MachineDecl& decl, const OperationDef* op) {
        op_ = op;
        MachineBody body;
        for (const auto& s : decl.states) {
            StateEntry e{s.name, compileActions(s.entry), compileActions(s.during), compileActions(s.exit), s.isFinal};
            body.states.push_back(std::move(e));
        }
        auto stateIdx = [&](const std::string& n) -> std::size_t {
            for (std::size_t i = 0; i < decl.states.size(); ++i)
                if (decl.states[i].name == n) return i;
            throw CompileError("unknown state '" + n + "'");
        };
        body.initial = stateIdx(decl.initial);
        for (const auto& t : decl.transitions) {
            TransitionEntry e;
            e.source = stateIdx(t.source.name);
            e.target = stateIdx(t.target.name);
            if (t.trigger) {
                auto ev = scope_.eventIndex(t.trigger->name);
                if (!ev) throw CompileError("machine '" + scope_.machine + "' has no event '" + t.trigger->name + "'");
                e.event = ev;
            }
            if (t.guard) e.guard = compileExpression(*t.guard, TypeKind::Boolean);
            e.action = compileActions(t.action);
            body.transitions.push_back(std::move(e));
        }
        op_ = nullptr;
        return body;
    }

    std::optional<Program> compileContract(const std::optional<Expr>& cond, const OperationDef& def) {
        if (!cond) return std::nullopt;
        op_ = &def;
        auto p = compileExpression(*cond, TypeKind::Boolean);
        op_ = nullptr;
        return p;
    }

    Program compileExpression(const Expr& e, TypeKind expected) {
        Program p;
        emitExpr(p, e);
        convert(p, type(e), expected);
        return p;
    }

    std::optional<Program> compileActions(const std::optional<ActionSeq>& seq) {
        if (!seq) return std::nullopt;
        Program p;
        for (const auto& a : *seq) emitAction(p, a);
        return p;
    }

    // --- emission ------------------------------------------------------------------

    static TypeKind type(const Expr& e) {
        if (!e.type) throw CompileError("expression was not type-checked");
        return *e.type;
    }

    static void emit(Program& p, OpCode op, std::int64_t arg = 0) { p.code.push_back({op, arg, false}); }

    static void convert(Program& p, TypeKind from, TypeKind to) {
        if (from == TypeKind::Int && to == TypeKind::Real) emit(p, OpCode::IntToReal);
    }

    std::size_t varSlot(const std::string& name) const {
        auto i = scope_.varIndex(name);
        if (!i) throw CompileError("machine '" + scope_.machine + "' has no variable '" + name + "'");
        return *i;
    }

    std::optional<std::size_t> paramSlot(const std::string& name) const {
        if (!op_) return std::nullopt;
        for (std::size_t i = 0; i < op_->params.size(); ++i)
            if (op_->params[i].name == name) return i;
        return std::nullopt;
    }

    void emitAction(Program& p, const Action& a) {
        switch (a.kind) {
            case ActionKind::ClockReset: {
                auto c = scope_.clockIndex(a.name);
                if (!c) throw CompileError("unknown clock '" + a.name + "'");
                emit(p, OpCode::ResetClock, static_cast<std::int64_t>(*c));
                break;
            }
            case ActionKind::Assign: {
                const auto slot = varSlot(a.name);
                emitExpr(p, a.args[0]);
                convert(p, type(a.args[0]), scope_.variables[slot].type);
                emit(p, OpCode::StoreVar, static_cast<std::int64_t>(slot));
                break;
            }
            case ActionKind::Call: {
                const auto& slot = opSlots_.at(a.name);
                const auto& params = slot.external ? out_.externalOps[slot.index].sig.params
                                                   : out_.definedOps[slot.index].sig.params;
                for (std::size_t i = 0; i < a.args.size(); ++i) {
                    emitExpr(p, a.args[i]);
                    convert(p, type(a.args[i]), params[i].type);
                }
                emit(p, slot.external ? OpCode::CallExt : OpCode::CallDef, static_cast<std::int64_t>(slot.index));
                break;
            }
        }
    }

    void emitExpr(Program& p, const Expr& e) {
        switch (e.kind) {
            case ExprKind::Literal: p.code.push_back({OpCode::PushLit, 0, e.literal}); return;
            case ExprKind::VarRef:
                if (auto param = paramSlot(e.name))
                    emit(p, OpCode::LoadParam, static_cast<std::int64_t>(*param));
                else
                    emit(p, OpCode::LoadVar, static_cast<std::int64_t>(varSlot(e.name)));
                return;
            case ExprKind::Since: {
                auto c = scope_.clockIndex(e.name);
                if (!c) throw CompileError("unknown clock '" + e.name + "'");
                emit(p, OpCode::LoadClock, static_cast<std::int64_t>(*c));
                return;
            }
            case ExprKind::Vector:
                for (const auto& o : e.operands) {
                    emitExpr(p, o);
                    convert(p, type(o), TypeKind::Real);
                }
                emit(p, OpCode::MakeVec);
                return;
            case ExprKind::Unary:
                emitExpr(p, e.operands[0]);
                emit(p, e.unary == UnaryOp::Not ? OpCode::Not : OpCode::Neg);
                return;
            case ExprKind::Conditional: {
                // cond; jf ELSE; then; jmp END; ELSE: otherwise; END:
                const auto result = type(e);
                emitExpr(p, e.operands[0]);
                const auto jf = p.code.size();
                emit(p, OpCode::JumpIfFalse);
                emitExpr(p, e.operands[1]);
                convert(p, type(e.operands[1]), result);
                const auto jmp = p.code.size();
                emit(p, OpCode::Jump);
                p.code[jf].arg = static_cast<std::int64_t>(p.code.size());
                emitExpr(p, e.operands[2]);
                convert(p, type(e.operands[2]), result);
                p.code[jmp].arg = static_cast<std::int64_t>(p.code.size());
                return;
            }
            case ExprKind::Binary: emitBinary(p, e); return;
        }
    }

    void emitBinary(Program& p, const Expr& e) {
        const auto& lhs = e.operands[0];
        const auto& rhs = e.operands[1];
        if (e.binary == BinaryOp::And || e.binary == BinaryOp::Or) {
            // and: lhs; jf SHORT; rhs; jmp END; SHORT: push false; END:
            const bool isAnd = e.binary == BinaryOp::And;
            emitExpr(p, lhs);
            const auto branch = p.code.size();
            emit(p, isAnd ? OpCode::JumpIfFalse : OpCode::JumpIfTrue);
            emitExpr(p, rhs);
            const auto jmp = p.code.size();
            emit(p, OpCode::Jump);
            p.code[branch].arg = static_cast<std::int64_t>(p.code.size());
            p.code.push_back({OpCode::PushLit, 0, !isAnd});
            p.code[jmp].arg = static_cast<std::int64_t>(p.code.size());
            return;
        }
        const auto lt = type(lhs);
        const auto rt = type(rhs);
        // Mixed int/real arithmetic and comparison run on reals; scalar*vector
        // scales by a real.
        TypeKind operandTarget = lt;
        if (lt != rt) operandTarget = TypeKind::Real;
        emitExpr(p, lhs);
        if (lt != TypeKind::Vector2d) convert(p, lt, operandTarget);
        emitExpr(p, rhs);
        if (rt != TypeKind::Vector2d) convert(p, rt, operandTarget);
        static constexpr std::pair<BinaryOp, OpCode> kOps[] = {
            {BinaryOp::Eq, OpCode::Eq},   {BinaryOp::Ne, OpCode::Ne},   {BinaryOp::Lt, OpCode::Lt},
            {BinaryOp::Le, OpCode::Le},   {BinaryOp::Gt, OpCode::Gt},   {BinaryOp::Ge, OpCode::Ge},
            {BinaryOp::Add, OpCode::Add}, {BinaryOp::Sub, OpCode::Sub}, {BinaryOp::Mul, OpCode::Mul},
            {BinaryOp::Div, OpCode::Div},
        };
        for (const auto& [bop, code] : kOps)
            if (bop == e.binary) emit(p, code);
    }

    const ResolvedModel& model_;
    const MachineScope& scope_;
    CompiledMachine out_;
    std::map<std::string, OpSlot> opSlots_;
    std::vector<std::size_t> pendingDefined_;
    std::vector<std::pair<std::size_t, std::size_t>> pendingExternalDefs_;
    const OperationDef* op_ = nullptr;
};

}  // namespace

CompiledMachine compile(const ResolvedModel& model, std::string_view machineName) {
    const auto* scope = model.findScope(machineName);
    const auto* decl = model.unit.findMachine(machineName);
    if (!scope || !decl) throw CompileError("unknown machine '" + std::string(machineName) + "'");
    return MachineCompiler(model, *scope).run(*decl);
}

}  // namespace smforge
