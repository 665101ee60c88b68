#include "smforge/parser.hpp"

namespace smforge {

namespace {

using namespace ast;

constexpr int kTernary = 0;
constexpr int kUnary = 6;

int precedence(BinaryOp op) {
    switch (op) {
        case BinaryOp::Or: return 1;
        case BinaryOp::And: return 2;
        case BinaryOp::Eq:
        case BinaryOp::Ne:
        case BinaryOp::Lt:
        case BinaryOp::Le:
        case BinaryOp::Gt:
        case BinaryOp::Ge: return 3;
        case BinaryOp::Add:
        case BinaryOp::Sub: return 4;
        case BinaryOp::Mul:
        case BinaryOp::Div: return 5;
    }
    return 0;
}

std::string wrapIf(bool cond, std::string s) { return cond ? "(" + s + ")" : s; }

std::string expr(const Expr& e, int minPrec) {
    switch (e.kind) {
        case ExprKind::Literal: return formatLiteral(e.literal);
        case ExprKind::VarRef: return e.name;
        case ExprKind::Since: return "since(" + e.name + ")";
        case ExprKind::Vector: return "(" + expr(e.operands[0], kTernary) + ", " + expr(e.operands[1], kTernary) + ")";
        case ExprKind::Unary: {
            std::string op = e.unary == UnaryOp::Not ? "not " : "-";
            return wrapIf(minPrec > kUnary, op + expr(e.operands[0], kUnary));
        }
        case ExprKind::Binary: {
            const int p = precedence(e.binary);
            const bool comparison = p == 3;
            auto lhs = expr(e.operands[0], comparison ? p + 1 : p);
            auto rhs = expr(e.operands[1], p + 1);
            return wrapIf(p < minPrec, lhs + " " + std::string(spelling(e.binary)) + " " + rhs);
        }
        case ExprKind::Conditional: {
            auto s = expr(e.operands[0], 1) + " ? " + expr(e.operands[1], kTernary) + " : " +
                     expr(e.operands[2], kTernary);
            return wrapIf(minPrec > kTernary, s);
        }
    }
    return {};
}

std::string params(const std::vector<Param>& ps) {
    std::string out = "(";
    for (std::size_t i = 0; i < ps.size(); ++i) {
        if (i) out += ", ";
        out += ps[i].name + " : " + std::string(typeName(ps[i].type));
    }
    return out + ")";
}

std::string action(const Action& a) {
    switch (a.kind) {
        case ActionKind::ClockReset: return "#" + a.name;
        case ActionKind::Assign: return a.name + " := " + expr(a.args[0], kTernary);
        case ActionKind::Call: {
            std::string out = a.name + "(";
            for (std::size_t i = 0; i < a.args.size(); ++i) {
                if (i) out += ", ";
                out += expr(a.args[i], kTernary);
            }
            return out + ")";
        }
    }
    return {};
}

std::string actions(const ActionSeq& seq) {
    std::string out;
    for (std::size_t i = 0; i < seq.size(); ++i) {
        if (i) out += "; ";
        out += action(seq[i]);
    }
    return out;
}

std::string varDecl(const VarDecl& v) {
    std::string out = "var " + v.name + " : " + std::string(typeName(v.type));
    if (v.init) out += " = " + formatLiteral(*v.init);
    return out;
}

void statesAndTransitions(std::string& out, const MachineDecl& m) {
    for (const auto& s : m.states) {
        out += "    ";
        if (s.name == m.initial) out += "initial ";
        if (s.isFinal) out += "final ";
        out += "state " + s.name;
        if (s.entry || s.during || s.exit) {
            out += " {\n";
            if (s.entry) out += "        entry " + actions(*s.entry) + "\n";
            if (s.during) out += "        during " + actions(*s.during) + "\n";
            if (s.exit) out += "        exit " + actions(*s.exit) + "\n";
            out += "    }";
        }
        out += "\n";
    }
    for (const auto& t : m.transitions) {
        out += "    transition " + t.source.name + " -> " + t.target.name;
        if (t.trigger) out += " on " + t.trigger->name;
        if (t.guard) out += " [" + expr(*t.guard, kTernary) + "]";
        if (t.action) out += " / " + actions(*t.action);
        out += "\n";
    }
}

void renderInterface(std::string& out, const InterfaceDecl& i) {
    out += "interface " + i.name + " {\n";
    for (const auto& v : i.variables) out += "    " + varDecl(v) + "\n";
    for (const auto& e : i.events) out += "    event " + e.name + "\n";
    for (const auto& op : i.operations) out += "    op " + op.name + params(op.params) + "\n";
    out += "}\n";
}

void renderMachine(std::string& out, const MachineDecl& m) {
    out += "machine " + m.name;
    for (std::size_t i = 0; i < m.required.size(); ++i) out += (i ? ", " : " requires ") + m.required[i].name;
    out += " {\n";
    for (const auto& c : m.clocks) out += "    clock " + c.name + "\n";
    for (const auto& v : m.variables) out += "    " + varDecl(v) + "\n";
    statesAndTransitions(out, m);
    out += "}\n";
}

void renderOperation(std::string& out, const OperationDef& op) {
    out += "operation " + op.name + params(op.params);
    if (op.pre) out += "\n    pre " + expr(*op.pre, kTernary);
    if (op.post) out += "\n    post " + expr(*op.post, kTernary);
    if (op.body) {
        out += " {\n";
        statesAndTransitions(out, *op.body);
        out += "}";
    }
    out += "\n";
}

void renderModule(std::string& out, const ModuleDecl& mod) {
    out += "module " + mod.name + " {\n    platform " + mod.platform.name + ";\n";
    for (const auto& c : mod.controllers) out += "    controller " + c.name + ";\n";
    out += "}\n";
}

}  // namespace

std::string renderExpr(const Expr& e) {
    return expr(e, kTernary);
}

std::string render(const ModelUnit& unit) {
    std::string out;
    for (std::size_t i = 0; i < unit.order.size(); ++i) {
        if (i) out += "\n";
        const auto ref = unit.order[i];
        switch (ref.kind) {
            case DeclKind::Interface: renderInterface(out, unit.interfaces[ref.index]); break;
            case DeclKind::Machine: renderMachine(out, unit.machines[ref.index]); break;
            case DeclKind::Operation: renderOperation(out, unit.operations[ref.index]); break;
            case DeclKind::Module: renderModule(out, unit.modules[ref.index]); break;
        }
    }
    return out;
}

}  // namespace smforge
