#include "smforge/ast.hpp"

#include <algorithm>

namespace smforge::ast {

std::string_view spelling(UnaryOp op) {
    return op == UnaryOp::Not ? "not" : "-";
}

std::string_view spelling(BinaryOp op) {
    switch (op) {
        case BinaryOp::And: return "and";
        case BinaryOp::Or: return "or";
        case BinaryOp::Eq: return "==";
        case BinaryOp::Ne: return "!=";
        case BinaryOp::Lt: return "<";
        case BinaryOp::Le: return "<=";
        case BinaryOp::Gt: return ">";
        case BinaryOp::Ge: return ">=";
        case BinaryOp::Add: return "+";
        case BinaryOp::Sub: return "-";
        case BinaryOp::Mul: return "*";
        case BinaryOp::Div: return "/";
    }
    return "?";
}

Expr Expr::makeLiteral(Value v, SourceSpan span) {
    Expr e;
    e.kind = ExprKind::Literal;
    e.literal = v;
    e.span = std::move(span);
    return e;
}

Expr Expr::makeVar(std::string name, SourceSpan span) {
    Expr e;
    e.kind = ExprKind::VarRef;
    e.name = std::move(name);
    e.span = std::move(span);
    return e;
}

Expr Expr::makeSince(std::string clock, SourceSpan span) {
    Expr e;
    e.kind = ExprKind::Since;
    e.name = std::move(clock);
    e.span = std::move(span);
    return e;
}

Expr Expr::makeUnary(UnaryOp op, Expr operand, SourceSpan span) {
    Expr e;
    e.kind = ExprKind::Unary;
    e.unary = op;
    e.operands.push_back(std::move(operand));
    e.span = std::move(span);
    return e;
}

Expr Expr::makeBinary(BinaryOp op, Expr lhs, Expr rhs, SourceSpan span) {
    Expr e;
    e.kind = ExprKind::Binary;
    e.binary = op;
    e.operands.push_back(std::move(lhs));
    e.operands.push_back(std::move(rhs));
    e.span = std::move(span);
    return e;
}

Expr Expr::makeVector(Expr x, Expr y, SourceSpan span) {
    Expr e;
    e.kind = ExprKind::Vector;
    e.operands.push_back(std::move(x));
    e.operands.push_back(std::move(y));
    e.span = std::move(span);
    return e;
}

Expr Expr::makeConditional(Expr cond, Expr then, Expr otherwise, SourceSpan span) {
    Expr e;
    e.kind = ExprKind::Conditional;
    e.operands.push_back(std::move(cond));
    e.operands.push_back(std::move(then));
    e.operands.push_back(std::move(otherwise));
    e.span = std::move(span);
    return e;
}

const StateDecl* MachineDecl::findState(std::string_view stateName) const {
    auto it = std::find_if(states.begin(), states.end(), [&](const StateDecl& s) { return s.name == stateName; });
    return it == states.end() ? nullptr : &*it;
}

namespace {

template <typename T>
const T* findByName(const std::vector<T>& items, std::string_view name) {
    auto it = std::find_if(items.begin(), items.end(), [&](const T& x) { return x.name == name; });
    return it == items.end() ? nullptr : &*it;
}

template <typename T, typename Eq>
bool sameList(const std::vector<T>& a, const std::vector<T>& b, Eq eq) {
    return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin(), eq);
}

template <typename T, typename Eq>
bool sameOptional(const std::optional<T>& a, const std::optional<T>& b, Eq eq) {
    if (a.has_value() != b.has_value()) return false;
    return !a || eq(*a, *b);
}

bool sameIdent(const Ident& a, const Ident& b) { return a.name == b.name; }
bool sameParam(const Param& a, const Param& b) { return a.name == b.name && a.type == b.type; }
bool sameExprRef(const Expr& a, const Expr& b) { return sameShape(a, b); }

bool sameAction(const Action& a, const Action& b) {
    return a.kind == b.kind && a.name == b.name && sameList(a.args, b.args, sameExprRef);
}

bool sameActions(const ActionSeq& a, const ActionSeq& b) { return sameList(a, b, sameAction); }

bool sameVar(const VarDecl& a, const VarDecl& b) {
    return a.name == b.name && a.type == b.type && a.init == b.init;
}

bool sameSig(const OpSig& a, const OpSig& b) {
    return a.name == b.name && sameList(a.params, b.params, sameParam);
}

bool sameInterface(const InterfaceDecl& a, const InterfaceDecl& b) {
    return a.name == b.name && sameList(a.variables, b.variables, sameVar) &&
           sameList(a.events, b.events, sameIdent) && sameList(a.operations, b.operations, sameSig);
}

bool sameState(const StateDecl& a, const StateDecl& b) {
    return a.name == b.name && a.isFinal == b.isFinal && sameOptional(a.entry, b.entry, sameActions) &&
           sameOptional(a.during, b.during, sameActions) && sameOptional(a.exit, b.exit, sameActions);
}

bool sameTransition(const TransitionDecl& a, const TransitionDecl& b) {
    return a.source.name == b.source.name && a.target.name == b.target.name &&
           sameOptional(a.trigger, b.trigger, sameIdent) && sameOptional(a.guard, b.guard, sameExprRef) &&
           sameOptional(a.action, b.action, sameActions);
}

bool sameMachine(const MachineDecl& a, const MachineDecl& b) {
    return a.name == b.name && a.initial == b.initial && sameList(a.required, b.required, sameIdent) &&
           sameList(a.clocks, b.clocks, sameIdent) && sameList(a.variables, b.variables, sameVar) &&
           sameList(a.states, b.states, sameState) && sameList(a.transitions, b.transitions, sameTransition);
}

bool sameOperation(const OperationDef& a, const OperationDef& b) {
    return a.name == b.name && sameList(a.params, b.params, sameParam) && sameOptional(a.pre, b.pre, sameExprRef) &&
           sameOptional(a.post, b.post, sameExprRef) && sameOptional(a.body, b.body, sameMachine);
}

bool sameModule(const ModuleDecl& a, const ModuleDecl& b) {
    return a.name == b.name && a.platform.name == b.platform.name && sameList(a.controllers, b.controllers, sameIdent);
}

}  // namespace

const InterfaceDecl* ModelUnit::findInterface(std::string_view n) const { return findByName(interfaces, n); }
const MachineDecl* ModelUnit::findMachine(std::string_view n) const { return findByName(machines, n); }
const OperationDef* ModelUnit::findOperation(std::string_view n) const { return findByName(operations, n); }

bool sameShape(const Expr& a, const Expr& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
        case ExprKind::Literal: return a.literal == b.literal;
        case ExprKind::VarRef:
        case ExprKind::Since: return a.name == b.name;
        case ExprKind::Unary:
            if (a.unary != b.unary) return false;
            break;
        case ExprKind::Binary:
            if (a.binary != b.binary) return false;
            break;
        case ExprKind::Vector:
        case ExprKind::Conditional: break;
    }
    return sameList(a.operands, b.operands, sameExprRef);
}

bool sameShape(const ModelUnit& a, const ModelUnit& b) {
    return a.order == b.order && sameList(a.interfaces, b.interfaces, sameInterface) &&
           sameList(a.machines, b.machines, sameMachine) && sameList(a.operations, b.operations, sameOperation) &&
           sameList(a.modules, b.modules, sameModule);
}

}  // namespace smforge::ast
