#include "smforge/parser.hpp"

#include "smforge/lexer.hpp"

#include <charconv>
#include <set>
#include <stdexcept>
#include <utility>

namespace smforge {

namespace {

using namespace ast;

struct SyntaxError {
    Diagnostic diagnostic;
};

class Parser {
public:
    Parser(std::vector<Token> tokens, std::string file) : tokens_(std::move(tokens)), file_(std::move(file)) {}

    ParseResult run() {
        ModelUnit unit;
        unit.file = file_;
        try {
            while (!atEnd()) parseDeclaration(unit);
        } catch (const SyntaxError& e) {
            ParseResult r;
            r.diagnostics.push_back(e.diagnostic);
            return r;
        }
        ParseResult r;
        r.diagnostics = std::move(structural_);
        sortDiagnostics(r.diagnostics);
        if (r.diagnostics.empty()) r.unit = std::move(unit);
        return r;
    }

private:
    // --- token helpers -------------------------------------------------------

    const Token& peek(std::size_t ahead = 0) const {
        std::size_t i = std::min(pos_ + ahead, tokens_.size() - 1);
        return tokens_[i];
    }
    bool atEnd() const { return peek().kind == TokenKind::EndOfInput; }

    bool isKw(std::string_view kw, std::size_t ahead = 0) const {
        const auto& t = peek(ahead);
        return t.kind == TokenKind::Keyword && t.text == kw;
    }
    bool isPunct(std::string_view p, std::size_t ahead = 0) const {
        const auto& t = peek(ahead);
        return t.kind == TokenKind::Punct && t.text == p;
    }

    const Token& take() {
        const Token& t = tokens_[pos_];
        if (pos_ + 1 < tokens_.size()) ++pos_;
        last_ = &t;
        return t;
    }

    [[noreturn]] void fail(const Token& at, const std::string& expected) const {
        std::string found = at.kind == TokenKind::EndOfInput ? "end of input" : "'" + at.text + "'";
        throw SyntaxError{{"P02", Severity::Error, at.span, "expected " + expected + ", found " + found}};
    }

    const Token& expectKw(std::string_view kw) {
        if (!isKw(kw)) fail(peek(), "'" + std::string(kw) + "'");
        return take();
    }
    const Token& expectPunct(std::string_view p) {
        if (!isPunct(p)) fail(peek(), "'" + std::string(p) + "'");
        return take();
    }
    Ident expectIdent(std::string_view what = "identifier") {
        if (peek().kind != TokenKind::Identifier) fail(peek(), std::string(what));
        const auto& t = take();
        return {t.text, t.span};
    }
    bool acceptPunct(std::string_view p) {
        if (!isPunct(p)) return false;
        take();
        return true;
    }

    SourceSpan spanSince(const SourceSpan& start) const { return last_ ? merge(start, last_->span) : start; }

    void structural(const SourceSpan& span, std::string message) {
        structural_.push_back({"P03", Severity::Error, span, std::move(message)});
    }

    // --- declarations --------------------------------------------------------

    void parseDeclaration(ModelUnit& unit) {
        if (isKw("interface")) {
            unit.order.push_back({DeclKind::Interface, unit.interfaces.size()});
            unit.interfaces.push_back(parseInterface());
        } else if (isKw("machine")) {
            unit.order.push_back({DeclKind::Machine, unit.machines.size()});
            unit.machines.push_back(parseMachine());
        } else if (isKw("operation")) {
            unit.order.push_back({DeclKind::Operation, unit.operations.size()});
            unit.operations.push_back(parseOperation());
        } else if (isKw("module")) {
            unit.order.push_back({DeclKind::Module, unit.modules.size()});
            unit.modules.push_back(parseModule());
        } else {
            fail(peek(), "'interface', 'machine', 'operation' or 'module'");
        }
    }

    InterfaceDecl parseInterface() {
        const auto start = expectKw("interface").span;
        InterfaceDecl decl;
        decl.name = expectIdent("interface name").name;
        expectPunct("{");
        std::set<std::string> seen;
        auto note = [&](const std::string& name, const SourceSpan& span) {
            if (!seen.insert(name).second)
                structural(span, "duplicate member '" + name + "' in interface '" + decl.name + "'");
        };
        while (!isPunct("}")) {
            if (isKw("var")) {
                decl.variables.push_back(parseVarDecl());
                note(decl.variables.back().name, decl.variables.back().span);
            } else if (isKw("event")) {
                take();
                decl.events.push_back(expectIdent("event name"));
                note(decl.events.back().name, decl.events.back().span);
            } else if (isKw("op")) {
                const auto opStart = take().span;
                OpSig sig;
                sig.name = expectIdent("operation name").name;
                sig.params = parseParamList();
                sig.span = spanSince(opStart);
                note(sig.name, sig.span);
                decl.operations.push_back(std::move(sig));
            } else {
                fail(peek(), "'var', 'event', 'op' or '}'");
            }
        }
        expectPunct("}");
        decl.span = spanSince(start);
        return decl;
    }

    VarDecl parseVarDecl() {
        const auto start = expectKw("var").span;
        VarDecl v;
        v.name = expectIdent("variable name").name;
        expectPunct(":");
        v.type = parseType();
        if (acceptPunct("=")) v.init = parseLiteral();
        v.span = spanSince(start);
        return v;
    }

    TypeKind parseType() {
        const auto& t = peek();
        if (t.kind == TokenKind::Keyword) {
            if (auto type = typeFromName(t.text)) {
                take();
                return *type;
            }
        }
        fail(t, "type ('boolean', 'int', 'real' or 'vector2d')");
    }

    std::vector<Param> parseParamList() {
        expectPunct("(");
        std::vector<Param> params;
        if (!isPunct(")")) {
            do {
                auto id = expectIdent("parameter name");
                expectPunct(":");
                Param p{id.name, parseType(), {}};
                p.span = spanSince(id.span);
                params.push_back(std::move(p));
            } while (acceptPunct(","));
        }
        expectPunct(")");
        return params;
    }

    double parseSignedNumber() {
        bool negative = acceptPunct("-");
        const auto& t = peek();
        double v = 0.0;
        if (t.kind == TokenKind::Integer) {
            v = static_cast<double>(integerValue(take()));
        } else if (t.kind == TokenKind::Real) {
            v = realValue(take());
        } else {
            fail(t, "number");
        }
        return negative ? -v : v;
    }

    Value parseLiteral() {
        const auto& t = peek();
        if (isKw("true") || isKw("false")) return take().text == "true";
        if (isPunct("(")) {
            take();
            Vec2 p;
            p.x = parseSignedNumber();
            expectPunct(",");
            p.y = parseSignedNumber();
            expectPunct(")");
            return p;
        }
        bool negative = isPunct("-");
        if (negative) take();
        const auto& n = peek();
        if (n.kind == TokenKind::Integer) {
            auto v = integerValue(take());
            return negative ? -v : v;
        }
        if (n.kind == TokenKind::Real) {
            auto v = realValue(take());
            return negative ? -v : v;
        }
        fail(negative ? n : t, "literal");
    }

    static std::int64_t integerValue(const Token& t) {
        std::int64_t v = 0;
        std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
        return v;
    }
    static double realValue(const Token& t) {
        double v = 0.0;
        std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
        return v;
    }

    MachineDecl parseMachine() {
        const auto start = expectKw("machine").span;
        MachineDecl m;
        m.name = expectIdent("machine name").name;
        if (isKw("requires")) {
            take();
            do {
                m.required.push_back(expectIdent("interface name"));
            } while (acceptPunct(","));
        }
        expectPunct("{");
        while (isKw("clock") || isKw("var")) {
            if (isKw("clock")) {
                take();
                m.clocks.push_back(expectIdent("clock name"));
            } else {
                m.variables.push_back(parseVarDecl());
            }
        }
        auto initials = parseStatesAndTransitions(m);
        expectPunct("}");
        m.span = spanSince(start);
        checkMachineShape(m, initials, false);
        return m;
    }

    /// Returns the spans of every state marked `initial`.
    std::vector<SourceSpan> parseStatesAndTransitions(MachineDecl& m) {
        std::vector<SourceSpan> initialSpans;
        while (isKw("initial") || isKw("final") || isKw("state")) {
            const auto stateStart = peek().span;
            bool initial = false;
            StateDecl s;
            if (isKw("initial")) {
                take();
                initial = true;
            }
            if (isKw("final")) {
                take();
                s.isFinal = true;
            }
            expectKw("state");
            s.name = expectIdent("state name").name;
            if (acceptPunct("{")) {
                if (isKw("entry")) {
                    take();
                    s.entry = parseActions();
                }
                if (isKw("during")) {
                    take();
                    s.during = parseActions();
                }
                if (isKw("exit")) {
                    take();
                    s.exit = parseActions();
                }
                expectPunct("}");
            }
            s.span = spanSince(stateStart);
            if (initial) {
                initialSpans.push_back(s.span);
                if (m.initial.empty()) m.initial = s.name;
            }
            m.states.push_back(std::move(s));
        }
        while (isKw("transition")) m.transitions.push_back(parseTransition());
        if (!isPunct("}")) fail(peek(), "'state', 'transition' or '}'");
        return initialSpans;
    }

    void checkMachineShape(const MachineDecl& m, const std::vector<SourceSpan>& initialSpans, bool isBody) {
        if (initialSpans.empty()) structural(m.span, "no initial state in '" + m.name + "'");
        for (std::size_t i = 1; i < initialSpans.size(); ++i)
            structural(initialSpans[i], "duplicate initial state in '" + m.name + "'");
        bool anyFinal = false;
        for (const auto& s : m.states) {
            if (!s.isFinal) continue;
            anyFinal = true;
            if (s.during || s.exit)
                structural(s.span, "final state '" + s.name + "' cannot have during or exit actions");
        }
        for (const auto& t : m.transitions) {
            const auto* src = m.findState(t.source.name);
            if (src && src->isFinal)
                structural(t.span, "transition leaves final state '" + t.source.name + "'");
        }
        if (isBody && !anyFinal) structural(m.span, "operation body '" + m.name + "' has no final state");
    }

    TransitionDecl parseTransition() {
        const auto start = expectKw("transition").span;
        TransitionDecl t;
        t.source = expectIdent("source state");
        expectPunct("->");
        t.target = expectIdent("target state");
        if (isKw("on")) {
            take();
            t.trigger = expectIdent("event name");
        }
        if (acceptPunct("[")) {
            t.guard = parseExpr();
            expectPunct("]");
        }
        if (acceptPunct("/")) t.action = parseActions();
        t.span = spanSince(start);
        return t;
    }

    ActionSeq parseActions() {
        ActionSeq seq;
        do {
            seq.push_back(parseAction());
        } while (acceptPunct(";"));
        return seq;
    }

    Action parseAction() {
        Action a;
        const auto start = peek().span;
        if (acceptPunct("#")) {
            a.kind = ActionKind::ClockReset;
            a.name = expectIdent("clock name").name;
        } else {
            auto id = expectIdent("action");
            a.name = id.name;
            if (acceptPunct(":=")) {
                a.kind = ActionKind::Assign;
                a.args.push_back(parseExpr());
            } else if (acceptPunct("(")) {
                a.kind = ActionKind::Call;
                if (!isPunct(")")) {
                    do {
                        a.args.push_back(parseExpr());
                    } while (acceptPunct(","));
                }
                expectPunct(")");
            } else {
                fail(peek(), "':=' or '('");
            }
        }
        a.span = spanSince(start);
        return a;
    }

    OperationDef parseOperation() {
        const auto start = expectKw("operation").span;
        OperationDef op;
        op.name = expectIdent("operation name").name;
        op.params = parseParamList();
        if (isKw("pre")) {
            take();
            op.pre = parseExpr();
        }
        if (isKw("post")) {
            take();
            op.post = parseExpr();
        }
        if (isPunct("{")) {
            const auto bodyStart = take().span;
            MachineDecl body;
            body.name = op.name;
            auto initials = parseStatesAndTransitions(body);
            expectPunct("}");
            body.span = spanSince(bodyStart);
            checkMachineShape(body, initials, true);
            op.body = std::move(body);
        }
        op.span = spanSince(start);
        return op;
    }

    ModuleDecl parseModule() {
        const auto start = expectKw("module").span;
        ModuleDecl mod;
        mod.name = expectIdent("module name").name;
        expectPunct("{");
        expectKw("platform");
        mod.platform = expectIdent("platform name");
        expectPunct(";");
        while (isKw("controller")) {
            take();
            mod.controllers.push_back(expectIdent("controller name"));
            expectPunct(";");
        }
        expectPunct("}");
        mod.span = spanSince(start);
        if (mod.controllers.empty()) structural(mod.span, "module '" + mod.name + "' declares no controller");
        return mod;
    }

    // --- expressions ---------------------------------------------------------
    // ternary < or < and < comparison < additive < multiplicative < unary

    Expr parseExpr() {
        auto cond = parseOr();
        if (!acceptPunct("?")) return cond;
        auto then = parseExpr();
        expectPunct(":");
        auto otherwise = parseExpr();
        auto span = merge(cond.span, otherwise.span);
        return Expr::makeConditional(std::move(cond), std::move(then), std::move(otherwise), span);
    }

    Expr parseOr() {
        auto lhs = parseAnd();
        while (isKw("or")) {
            take();
            auto rhs = parseAnd();
            auto span = merge(lhs.span, rhs.span);
            lhs = Expr::makeBinary(BinaryOp::Or, std::move(lhs), std::move(rhs), span);
        }
        return lhs;
    }

    Expr parseAnd() {
        auto lhs = parseComparison();
        while (isKw("and")) {
            take();
            auto rhs = parseComparison();
            auto span = merge(lhs.span, rhs.span);
            lhs = Expr::makeBinary(BinaryOp::And, std::move(lhs), std::move(rhs), span);
        }
        return lhs;
    }

    Expr parseComparison() {
        auto lhs = parseAdditive();
        static const std::pair<const char*, BinaryOp> kOps[] = {
            {"==", BinaryOp::Eq}, {"!=", BinaryOp::Ne}, {"<", BinaryOp::Lt},
            {"<=", BinaryOp::Le}, {">", BinaryOp::Gt}, {">=", BinaryOp::Ge},
        };
        for (const auto& [text, op] : kOps) {
            if (isPunct(text)) {
                take();
                auto rhs = parseAdditive();
                auto span = merge(lhs.span, rhs.span);
                return Expr::makeBinary(op, std::move(lhs), std::move(rhs), span);
            }
        }
        return lhs;
    }

    Expr parseAdditive() {
        auto lhs = parseMultiplicative();
        while (isPunct("+") || isPunct("-")) {
            auto op = take().text == "+" ? BinaryOp::Add : BinaryOp::Sub;
            auto rhs = parseMultiplicative();
            auto span = merge(lhs.span, rhs.span);
            lhs = Expr::makeBinary(op, std::move(lhs), std::move(rhs), span);
        }
        return lhs;
    }

    Expr parseMultiplicative() {
        auto lhs = parseUnary();
        while (isPunct("*") || isPunct("/")) {
            auto op = take().text == "*" ? BinaryOp::Mul : BinaryOp::Div;
            auto rhs = parseUnary();
            auto span = merge(lhs.span, rhs.span);
            lhs = Expr::makeBinary(op, std::move(lhs), std::move(rhs), span);
        }
        return lhs;
    }

    Expr parseUnary() {
        if (isKw("not") || isPunct("-")) {
            const auto& t = take();
            auto op = t.text == "not" ? UnaryOp::Not : UnaryOp::Negate;
            auto start = t.span;
            auto operand = parseUnary();
            auto span = merge(start, operand.span);
            return Expr::makeUnary(op, std::move(operand), span);
        }
        return parsePrimary();
    }

    Expr parsePrimary() {
        const auto& t = peek();
        if (t.kind == TokenKind::Integer) {
            take();
            return Expr::makeLiteral(integerValue(t), t.span);
        }
        if (t.kind == TokenKind::Real) {
            take();
            return Expr::makeLiteral(realValue(t), t.span);
        }
        if (isKw("true") || isKw("false")) {
            take();
            return Expr::makeLiteral(t.text == "true", t.span);
        }
        if (isKw("since")) {
            const auto start = take().span;
            expectPunct("(");
            auto clock = expectIdent("clock name");
            expectPunct(")");
            return Expr::makeSince(clock.name, spanSince(start));
        }
        if (t.kind == TokenKind::Identifier) {
            take();
            return Expr::makeVar(t.text, t.span);
        }
        if (isPunct("(")) {
            const auto start = take().span;
            auto first = parseExpr();
            if (acceptPunct(",")) {
                auto second = parseExpr();
                expectPunct(")");
                return Expr::makeVector(std::move(first), std::move(second), spanSince(start));
            }
            expectPunct(")");
            return first;
        }
        fail(t, "expression");
    }

    std::vector<Token> tokens_;
    std::string file_;
    std::size_t pos_ = 0;
    const Token* last_ = nullptr;
    std::vector<Diagnostic> structural_;
};

}  // namespace

ParseResult parse(std::string_view source, std::string_view file) {
    auto lexed = tokenize(source, file);
    if (!lexed.diagnostics.empty()) {
        ParseResult r;
        r.diagnostics = std::move(lexed.diagnostics);
        return r;
    }
    return Parser(std::move(lexed.tokens), std::string(file)).run();
}

}  // namespace smforge
