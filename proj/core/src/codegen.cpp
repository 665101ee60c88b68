#include "smforge/codegen.hpp"

#include <stdexcept>

namespace smforge {

namespace {

std::string cppType(TypeKind t) {
    switch (t) {
        case TypeKind::Boolean: return "bool";
        case TypeKind::Int: return "long";
        case TypeKind::Real: return "double";
        case TypeKind::Vector2d: return "Vector2d";
    }
    return "?";
}

std::string cppLiteral(const Value& v) {
    if (typeOf(v) == TypeKind::Vector2d) {
        const auto& p = std::get<Vec2>(v);
        return "Vector2d(" + formatReal(p.x) + ", " + formatReal(p.y) + ")";
    }
    return formatLiteral(v);
}

std::string paramList(const OpSignature& sig) {
    std::string out;
    for (std::size_t i = 0; i < sig.params.size(); ++i) {
        if (i) out += ", ";
        out += cppType(sig.params[i].type) + " " + sig.params[i].name;
    }
    return out;
}

std::string paramList(const ast::OpSig& sig) {
    std::string out;
    for (std::size_t i = 0; i < sig.params.size(); ++i) {
        if (i) out += ", ";
        out += cppType(sig.params[i].type) + " " + sig.params[i].name;
    }
    return out;
}

/// Rebuilds expression text from postfix programs produced by the compiler.
class Decompiler {
public:
    Decompiler(const CompiledMachine& m, const OpSignature* frame) : m_(m), frame_(frame) {}

    std::string expression(const Program& p) {
        auto stack = run(p, 0, p.code.size());
        if (stack.size() != 1) throw std::logic_error("expression program does not leave one value");
        return stack.front().text;
    }

    std::vector<std::string> statements(const Program& p) {
        stmts_.clear();
        run(p, 0, p.code.size());
        return stmts_;
    }

private:
    struct Term {
        std::string text;
        int prec;
    };

    static constexpr int kTernary = 1, kOr = 2, kAnd = 3, kCompare = 4, kAdd = 5, kMul = 6, kUnary = 7, kPrimary = 8;

    static std::string wrap(const Term& t, int minPrec) {
        return t.prec < minPrec ? "(" + t.text + ")" : t.text;
    }

    std::string callText(const Instr& in, std::vector<Term>& stack) {
        const auto k = static_cast<std::size_t>(in.arg);
        const auto& sig = in.op == OpCode::CallExt ? m_.externalOps.at(k).sig : m_.definedOps.at(k).sig;
        std::vector<std::string> args(sig.params.size());
        for (auto i = args.size(); i-- > 0;) {
            args[i] = stack.back().text;
            stack.pop_back();
        }
        std::string out = sig.name + "(";
        for (std::size_t i = 0; i < args.size(); ++i) out += (i ? ", " : "") + args[i];
        return out + ")";
    }

    std::vector<Term> run(const Program& p, std::size_t begin, std::size_t end) {
        std::vector<Term> stack;
        auto pop = [&] {
            Term t = std::move(stack.back());
            stack.pop_back();
            return t;
        };
        auto binary = [&](const char* op, int prec) {
            auto b = pop();
            auto a = pop();
            stack.push_back({wrap(a, prec) + " " + op + " " + wrap(b, prec + 1), prec});
        };
        std::size_t pc = begin;
        while (pc < end) {
            const auto& in = p.code[pc];
            const auto arg = static_cast<std::size_t>(in.arg);
            switch (in.op) {
                case OpCode::PushLit: stack.push_back({cppLiteral(in.lit), kPrimary}); break;
                case OpCode::LoadVar: stack.push_back({m_.vars.at(arg).name, kPrimary}); break;
                case OpCode::LoadParam: stack.push_back({frame_->params.at(arg).name, kPrimary}); break;
                case OpCode::LoadClock: stack.push_back({m_.clocks.at(arg) + ".counter", kPrimary}); break;
                case OpCode::StoreVar: stmts_.push_back(m_.vars.at(arg).name + " = " + pop().text + ";"); break;
                case OpCode::ResetClock: stmts_.push_back(m_.clocks.at(arg) + ".ResetTimer();"); break;
                case OpCode::IntToReal: stack.push_back({"double(" + pop().text + ")", kPrimary}); break;
                case OpCode::Not: stack.push_back({"!" + wrap(pop(), kUnary), kUnary}); break;
                case OpCode::Neg: stack.push_back({"-" + wrap(pop(), kUnary), kUnary}); break;
                case OpCode::Add: binary("+", kAdd); break;
                case OpCode::Sub: binary("-", kAdd); break;
                case OpCode::Mul: binary("*", kMul); break;
                case OpCode::Div: binary("/", kMul); break;
                case OpCode::Eq: binary("==", kCompare); break;
                case OpCode::Ne: binary("!=", kCompare); break;
                case OpCode::Lt: binary("<", kCompare); break;
                case OpCode::Le: binary("<=", kCompare); break;
                case OpCode::Gt: binary(">", kCompare); break;
                case OpCode::Ge: binary(">=", kCompare); break;
                case OpCode::MakeVec: {
                    auto y = pop();
                    auto x = pop();
                    stack.push_back({"Vector2d(" + x.text + ", " + y.text + ")", kPrimary});
                    break;
                }
                case OpCode::JumpIfFalse:
                case OpCode::JumpIfTrue: {
                    // Shapes emitted by the compiler:
                    //   a and b:    a; jf S; b; jmp E; S: push false; E:
                    //   a or b:     a; jt S; b; jmp E; S: push true;  E:
                    //   c ? x : y:  c; jf S; x; jmp E; S: y;          E:
                    const auto cond = pop();
                    const auto split = arg;
                    const auto join = static_cast<std::size_t>(p.code.at(split - 1).arg);
                    const auto first = single(p, pc + 1, split - 1);
                    const bool shortCircuit = join == split + 1 && p.code[split].op == OpCode::PushLit &&
                                              p.code[split].lit == Value{in.op == OpCode::JumpIfTrue};
                    if (shortCircuit) {
                        const bool isAnd = in.op == OpCode::JumpIfFalse;
                        const int prec = isAnd ? kAnd : kOr;
                        stack.push_back({wrap(cond, prec) + (isAnd ? " && " : " || ") + wrap(first, prec + 1), prec});
                    } else {
                        const auto second = single(p, split, join);
                        stack.push_back(
                            {wrap(cond, kOr) + " ? " + wrap(first, kOr) + " : " + wrap(second, kTernary), kTernary});
                    }
                    pc = join;
                    continue;
                }
                case OpCode::Jump: throw std::logic_error("unstructured jump");
                case OpCode::CallExt:
                case OpCode::CallDef: stmts_.push_back(callText(in, stack) + ";"); break;
            }
            ++pc;
        }
        return stack;
    }

    Term single(const Program& p, std::size_t begin, std::size_t end) {
        auto s = run(p, begin, end);
        if (s.size() != 1) throw std::logic_error("branch does not leave one value");
        return s.front();
    }

    const CompiledMachine& m_;
    const OpSignature* frame_;
    std::vector<std::string> stmts_;
};

class Writer {
public:
    void line(const std::string& text = {}) {
        if (!text.empty()) out_.append(static_cast<std::size_t>(indent_) * 4, ' ');
        out_ += text;
        out_ += '\n';
    }
    /// Access specifiers sit at the enclosing class's indentation.
    void label(const std::string& text) {
        --indent_;
        line(text);
        ++indent_;
    }
    void open(const std::string& text) {
        line(text);
        ++indent_;
    }
    void close(const std::string& text = "}") {
        --indent_;
        line(text);
    }
    void dedent() { --indent_; }
    std::string take() { return std::move(out_); }

private:
    std::string out_;
    int indent_ = 0;
};

std::string header(const std::string& unit) {
    return "// " + unit + std::string(kGeneratedExtension) + ", generated by smforge; do not edit.";
}

GeneratedUnit interfaceUnit(const ast::InterfaceDecl& iface) {
    Writer w;
    w.line(header(iface.name));
    w.line();
    w.open("class " + iface.name + " {");
    w.label("public:");
    if (!iface.events.empty()) {
        std::string list;
        for (std::size_t i = 0; i < iface.events.size(); ++i) list += (i ? ", " : "") + iface.events[i].name;
        w.line("enum class Event { " + list + " };");
        w.line("Event event;");
        w.line();
    }
    for (const auto& v : iface.variables) {
        const auto init = v.init ? cppLiteral(*v.init) : cppLiteral(defaultValue(v.type));
        w.line(cppType(v.type) + " " + v.name + " = " + init + ";");
    }
    if (!iface.variables.empty()) w.line();
    w.line("virtual ~" + iface.name + "() = default;");
    for (const auto& op : iface.operations) w.line("virtual void " + op.name + "(" + paramList(op) + ");");
    w.close("};");
    return {iface.name, w.take()};
}

GeneratedUnit timerUnit() {
    Writer w;
    w.line(header("Timer"));
    w.line();
    w.open("class Timer {");
    w.label("public:");
    w.line("long counter = 0;");
    w.line("bool running = false;");
    w.line();
    w.line("void StartTimer() { running = true; counter = 0; }");
    w.line("void ResetTimer() { counter = 0; }");
    w.line("void Tick() { if (running) ++counter; }");
    w.close("};");
    return {"Timer", w.take()};
}

void emitStatements(Writer& w, Decompiler& d, const std::optional<Program>& p) {
    if (!p) return;
    for (const auto& s : d.statements(*p)) w.line(s);
}

/// Switch over states with the transition scan of one cycle; shared by the
/// machine and by operation bodies.
void emitScan(Writer& w, const CompiledMachine& m, const MachineBody& body, Decompiler& d, const std::string& stateVar,
              const std::string& enumName) {
    w.open("switch (" + stateVar + ") {");
    for (std::size_t s = 0; s < body.states.size(); ++s) {
        const auto& st = body.states[s];
        if (s) w.line();
        w.open("case " + enumName + "::" + st.name + ":");
        for (const auto& t : body.transitions) {
            if (t.source != s) continue;
            std::string cond;
            if (t.event) cond = "event == Event::" + m.events[*t.event];
            if (t.guard) {
                const auto g = d.expression(*t.guard);
                cond = cond.empty() ? g : cond + " && (" + g + ")";
            }
            w.open("if (" + (cond.empty() ? std::string("true") : cond) + ") {");
            emitStatements(w, d, st.exit);
            emitStatements(w, d, t.action);
            w.line(stateVar + " = " + enumName + "::" + body.states[t.target].name + ";");
            emitStatements(w, d, body.states[t.target].entry);
            w.line("break;");
            w.close();
        }
        emitStatements(w, d, st.during);
        w.line("break;");
        w.dedent();
    }
    w.close();
}

std::string stateList(const MachineBody& body) {
    std::string list;
    for (std::size_t i = 0; i < body.states.size(); ++i) list += (i ? ", " : "") + body.states[i].name;
    return list;
}

GeneratedUnit machineUnit(const CompiledMachine& m, std::span<const ast::InterfaceDecl* const> interfaces) {
    Writer w;
    w.line(header(m.name));
    w.line();
    std::string bases;
    for (std::size_t i = 0; i < interfaces.size(); ++i) bases += (i ? ", public " : " : public ") + interfaces[i]->name;
    w.open("class " + m.name + bases + " {");
    w.label("public:");
    w.line("enum class State { " + stateList(m.body) + " };");
    w.line("State state = State::" + m.body.states[m.body.initial].name + ";");
    for (const auto& c : m.clocks) w.line("Timer " + c + ";");

    // Variables not provided by an interface are the machine's own.
    bool ownHeader = false;
    for (const auto& v : m.vars) {
        bool inherited = false;
        for (const auto* iface : interfaces)
            for (const auto& iv : iface->variables) inherited = inherited || iv.name == v.name;
        if (inherited) continue;
        if (!ownHeader) w.line();
        ownHeader = true;
        w.line(cppType(v.type) + " " + v.name + " = " + cppLiteral(v.init) + ";");
    }
    w.line();
    if (!m.clocks.empty()) {
        w.open(m.name + "() {");
        for (const auto& c : m.clocks) w.line(c + ".StartTimer();");
        w.close();
    }
    w.line("void MakeTransition();");
    for (const auto& op : m.definedOps) {
        bool declared = false;
        for (const auto* iface : interfaces)
            for (const auto& sig : iface->operations) declared = declared || sig.name == op.sig.name;
        w.line("void " + op.sig.name + "(" + paramList(op.sig) + ")" + (declared ? " override;" : ";"));
    }
    w.line();
    w.label("private:");
    w.line("bool started = false;");
    w.close("};");

    Decompiler top(m, nullptr);
    w.line();
    w.open("void " + m.name + "::MakeTransition() {");
    w.open("if (!started) {");
    w.line("started = true;");
    emitStatements(w, top, m.body.states[m.body.initial].entry);
    w.close();
    emitScan(w, m, m.body, top, "state", "State");
    for (const auto& c : m.clocks) w.line(c + ".Tick();");
    w.close();

    for (const auto& op : m.definedOps) {
        Decompiler d(m, &op.sig);
        w.line();
        w.open("void " + m.name + "::" + op.sig.name + "(" + paramList(op.sig) + ") {");
        if (op.pre) w.line("assert(" + d.expression(*op.pre) + ");");
        w.line("enum class Step { " + stateList(op.body) + " };");
        w.line("Step step = Step::" + op.body.states[op.body.initial].name + ";");
        emitStatements(w, d, op.body.states[op.body.initial].entry);
        std::string finals;
        for (const auto& s : op.body.states)
            if (s.isFinal) finals += (finals.empty() ? "" : " && ") + std::string("step != Step::") + s.name;
        w.open("while (" + finals + ") {");
        emitScan(w, m, op.body, d, "step", "Step");
        w.close();
        if (op.post) w.line("assert(" + d.expression(*op.post) + ");");
        w.close();
    }
    return {m.name, w.take()};
}

}  // namespace

std::vector<GeneratedUnit> emitUnits(const CompiledMachine& machine,
                                     std::span<const ast::InterfaceDecl* const> interfaces) {
    std::vector<GeneratedUnit> units;
    for (const auto* iface : interfaces) units.push_back(interfaceUnit(*iface));
    units.push_back(machineUnit(machine, interfaces));
    if (!machine.clocks.empty()) units.push_back(timerUnit());
    return units;
}

std::string emitSource(const CompiledMachine& machine, const ast::InterfaceDecl& iface) {
    const ast::InterfaceDecl* list[] = {&iface};
    std::string out;
    for (const auto& u : emitUnits(machine, list)) {
        if (!out.empty()) out += '\n';
        out += u.text;
    }
    return out;
}

}  // namespace smforge
