#pragma once

/// @file ast.hpp
/// @brief Syntax tree of the controller language.
///
/// A ModelUnit holds every top-level declaration of one source file. Nodes
/// keep their source spans for diagnostics; structural equality (`sameShape`)
/// ignores spans and analyzer annotations.

#include "smforge/diagnostic.hpp"
#include "smforge/value.hpp"

#include <optional>
#include <string>
#include <vector>

namespace smforge::ast {

struct Ident {
    std::string name;
    SourceSpan span;
};

enum class ExprKind { Literal, VarRef, Unary, Binary, Since, Vector, Conditional };
enum class UnaryOp { Not, Negate };
enum class BinaryOp { And, Or, Eq, Ne, Lt, Le, Gt, Ge, Add, Sub, Mul, Div };

std::string_view spelling(UnaryOp op);
std::string_view spelling(BinaryOp op);

struct Expr {
    ExprKind kind = ExprKind::Literal;
    SourceSpan span;
    Value literal{false};             // Literal
    std::string name;                 // VarRef, Since (clock name)
    UnaryOp unary = UnaryOp::Not;     // Unary
    BinaryOp binary = BinaryOp::And;  // Binary
    std::vector<Expr> operands;       // Unary: 1, Binary/Vector: 2, Conditional: 3

    /// Filled in by the analyzer.
    std::optional<TypeKind> type;

    static Expr makeLiteral(Value v, SourceSpan span = {});
    static Expr makeVar(std::string name, SourceSpan span = {});
    static Expr makeSince(std::string clock, SourceSpan span = {});
    static Expr makeUnary(UnaryOp op, Expr operand, SourceSpan span = {});
    static Expr makeBinary(BinaryOp op, Expr lhs, Expr rhs, SourceSpan span = {});
    static Expr makeVector(Expr x, Expr y, SourceSpan span = {});
    static Expr makeConditional(Expr cond, Expr then, Expr otherwise, SourceSpan span = {});
};

enum class ActionKind { Call, Assign, ClockReset };

/// `Op(args)`, `var := expr` (value in args[0]) or `#clock`.
struct Action {
    ActionKind kind = ActionKind::Call;
    SourceSpan span;
    std::string name;
    std::vector<Expr> args;
};

/// Never present-but-empty.
using ActionSeq = std::vector<Action>;

struct Param {
    std::string name;
    TypeKind type = TypeKind::Real;
    SourceSpan span;
};

struct VarDecl {
    std::string name;
    TypeKind type = TypeKind::Real;
    std::optional<Value> init;
    SourceSpan span;
};

struct OpSig {
    std::string name;
    std::vector<Param> params;
    SourceSpan span;
};

struct InterfaceDecl {
    std::string name;
    std::vector<VarDecl> variables;
    std::vector<Ident> events;
    std::vector<OpSig> operations;
    SourceSpan span;
};

struct StateDecl {
    std::string name;
    bool isFinal = false;
    std::optional<ActionSeq> entry;
    std::optional<ActionSeq> during;
    std::optional<ActionSeq> exit;
    SourceSpan span;
};

struct TransitionDecl {
    Ident source;
    Ident target;
    std::optional<Ident> trigger;
    std::optional<Expr> guard;
    std::optional<ActionSeq> action;
    SourceSpan span;
};

struct MachineDecl {
    std::string name;
    std::vector<Ident> required;  // `requires` clause
    std::vector<Ident> clocks;
    std::vector<VarDecl> variables;
    std::vector<StateDecl> states;
    std::vector<TransitionDecl> transitions;
    std::string initial;
    SourceSpan span;

    const StateDecl* findState(std::string_view name) const;
};

struct OperationDef {
    std::string name;
    std::vector<Param> params;
    std::optional<Expr> pre;
    std::optional<Expr> post;
    /// State-machine body; absent for platform-bound operations.
    std::optional<MachineDecl> body;
    SourceSpan span;
};

struct ModuleDecl {
    std::string name;
    Ident platform;
    std::vector<Ident> controllers;
    SourceSpan span;
};

enum class DeclKind { Interface, Machine, Operation, Module };

struct DeclRef {
    DeclKind kind;
    std::size_t index;
    bool operator==(const DeclRef&) const = default;
};

struct ModelUnit {
    std::string file;
    std::vector<InterfaceDecl> interfaces;
    std::vector<MachineDecl> machines;
    std::vector<OperationDef> operations;
    std::vector<ModuleDecl> modules;
    /// Textual order across declaration kinds.
    std::vector<DeclRef> order;

    const InterfaceDecl* findInterface(std::string_view name) const;
    const MachineDecl* findMachine(std::string_view name) const;
    const OperationDef* findOperation(std::string_view name) const;
    bool empty() const { return order.empty(); }
};

/// Structural equality ignoring spans and type annotations.
bool sameShape(const Expr& a, const Expr& b);
bool sameShape(const ModelUnit& a, const ModelUnit& b);

}  // namespace smforge::ast
