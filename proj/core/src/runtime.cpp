#include "smforge/runtime.hpp"

#include <cmath>
#include <limits>

namespace smforge {

std::string_view faultName(FaultKind kind) {
    switch (kind) {
        case FaultKind::PreconditionViolation: return "preconditionViolation";
        case FaultKind::PostconditionViolation: return "postconditionViolation";
        case FaultKind::StepBudgetExceeded: return "stepBudgetExceeded";
        case FaultKind::Arithmetic: return "arithmetic";
    }
    return "?";
}

std::string Fault::describe() const {
    return std::string(faultName(kind)) + " " + detail;
}

namespace {

constexpr std::size_t kMaxCallDepth = 64;

struct FaultSignal {
    Fault fault;
};

[[noreturn]] void arithmetic(const char* what) {
    throw FaultSignal{{FaultKind::Arithmetic, what}};
}

[[noreturn]] void confused() {
    throw std::logic_error("operand type confusion in verified program");
}

template <class F>
std::int64_t checkedInt(F op, std::int64_t x, std::int64_t y) {
    std::int64_t r = 0;
    if (op(x, y, &r)) arithmetic("integer overflow");
    return r;
}

Value binaryArith(OpCode op, const Value& a, const Value& b) {
    const auto ta = typeOf(a);
    const auto tb = typeOf(b);
    if (ta == TypeKind::Int && tb == TypeKind::Int) {
        const auto x = std::get<std::int64_t>(a);
        const auto y = std::get<std::int64_t>(b);
        switch (op) {
            case OpCode::Add:
                return checkedInt([](auto p, auto q, auto* r) { return __builtin_add_overflow(p, q, r); }, x, y);
            case OpCode::Sub:
                return checkedInt([](auto p, auto q, auto* r) { return __builtin_sub_overflow(p, q, r); }, x, y);
            case OpCode::Mul:
                return checkedInt([](auto p, auto q, auto* r) { return __builtin_mul_overflow(p, q, r); }, x, y);
            case OpCode::Div:
                if (y == 0) arithmetic("division by zero");
                if (x == std::numeric_limits<std::int64_t>::min() && y == -1) arithmetic("integer overflow");
                return x / y;
            default: confused();
        }
    }
    if (ta == TypeKind::Real && tb == TypeKind::Real) {
        const auto x = std::get<double>(a);
        const auto y = std::get<double>(b);
        switch (op) {
            case OpCode::Add: return x + y;
            case OpCode::Sub: return x - y;
            case OpCode::Mul: return x * y;
            case OpCode::Div:
                if (y == 0.0) arithmetic("division by zero");
                return x / y;
            default: confused();
        }
    }
    if (ta == TypeKind::Vector2d && tb == TypeKind::Vector2d) {
        const auto& x = std::get<Vec2>(a);
        const auto& y = std::get<Vec2>(b);
        if (op == OpCode::Add) return Vec2{x.x + y.x, x.y + y.y};
        if (op == OpCode::Sub) return Vec2{x.x - y.x, x.y - y.y};
        confused();
    }
    if (op == OpCode::Mul && ta == TypeKind::Vector2d && tb == TypeKind::Real) {
        const auto& v = std::get<Vec2>(a);
        const auto s = std::get<double>(b);
        return Vec2{v.x * s, v.y * s};
    }
    if (op == OpCode::Mul && ta == TypeKind::Real && tb == TypeKind::Vector2d) {
        const auto s = std::get<double>(a);
        const auto& v = std::get<Vec2>(b);
        return Vec2{s * v.x, s * v.y};
    }
    confused();
}

bool compare(OpCode op, const Value& a, const Value& b) {
    if (op == OpCode::Eq) return a == b;
    if (op == OpCode::Ne) return a != b;
    double x = 0, y = 0;
    if (typeOf(a) == TypeKind::Int && typeOf(b) == TypeKind::Int) {
        const auto i = std::get<std::int64_t>(a);
        const auto j = std::get<std::int64_t>(b);
        switch (op) {
            case OpCode::Lt: return i < j;
            case OpCode::Le: return i <= j;
            case OpCode::Gt: return i > j;
            case OpCode::Ge: return i >= j;
            default: confused();
        }
    }
    if (typeOf(a) != TypeKind::Real || typeOf(b) != TypeKind::Real) confused();
    x = std::get<double>(a);
    y = std::get<double>(b);
    switch (op) {
        case OpCode::Lt: return x < y;
        case OpCode::Le: return x <= y;
        case OpCode::Gt: return x > y;
        case OpCode::Ge: return x >= y;
        default: confused();
    }
}

bool truth(const Value& v) {
    if (typeOf(v) != TypeKind::Boolean) confused();
    return std::get<bool>(v);
}

}  // namespace

struct ExecutionContext::Interp {
    ExecutionContext& ctx;
    TraceRecord& rec;
    std::size_t depth = 0;

    std::vector<Value> run(const Program& p, std::span<const Value> params) {
        std::vector<Value> stack;
        auto pop = [&] {
            Value v = std::move(stack.back());
            stack.pop_back();
            return v;
        };
        const auto& m = *ctx.machine_;
        std::size_t pc = 0;
        while (pc < p.code.size()) {
            const auto& in = p.code[pc++];
            const auto arg = static_cast<std::size_t>(in.arg);
            switch (in.op) {
                case OpCode::PushLit: stack.push_back(in.lit); break;
                case OpCode::LoadVar: stack.push_back(ctx.vars_[arg]); break;
                case OpCode::LoadParam: stack.push_back(params[arg]); break;
                case OpCode::LoadClock:
                    stack.push_back(static_cast<double>(ctx.clocks_[arg]) * ctx.config_.timeUnit);
                    break;
                case OpCode::StoreVar: ctx.setVar(arg, pop()); break;
                case OpCode::ResetClock: ctx.clocks_[arg] = 0; break;
                case OpCode::IntToReal: {
                    auto v = pop();
                    stack.push_back(static_cast<double>(std::get<std::int64_t>(v)));
                    break;
                }
                case OpCode::Not: stack.push_back(!truth(pop())); break;
                case OpCode::Neg: {
                    auto v = pop();
                    switch (typeOf(v)) {
                        case TypeKind::Int: {
                            const auto i = std::get<std::int64_t>(v);
                            if (i == std::numeric_limits<std::int64_t>::min()) arithmetic("integer overflow");
                            stack.push_back(-i);
                            break;
                        }
                        case TypeKind::Real: stack.push_back(-std::get<double>(v)); break;
                        case TypeKind::Vector2d: {
                            const auto& q = std::get<Vec2>(v);
                            stack.push_back(Vec2{-q.x, -q.y});
                            break;
                        }
                        default: confused();
                    }
                    break;
                }
                case OpCode::Add:
                case OpCode::Sub:
                case OpCode::Mul:
                case OpCode::Div: {
                    auto b = pop();
                    auto a = pop();
                    stack.push_back(binaryArith(in.op, a, b));
                    break;
                }
                case OpCode::Eq:
                case OpCode::Ne:
                case OpCode::Lt:
                case OpCode::Le:
                case OpCode::Gt:
                case OpCode::Ge: {
                    auto b = pop();
                    auto a = pop();
                    stack.push_back(compare(in.op, a, b));
                    break;
                }
                case OpCode::MakeVec: {
                    auto y = pop();
                    auto x = pop();
                    stack.push_back(Vec2{std::get<double>(x), std::get<double>(y)});
                    break;
                }
                case OpCode::Jump: pc = arg; break;
                case OpCode::JumpIfFalse:
                    if (!truth(pop())) pc = arg;
                    break;
                case OpCode::JumpIfTrue:
                    if (truth(pop())) pc = arg;
                    break;
                case OpCode::CallExt:
                case OpCode::CallDef: {
                    const bool ext = in.op == OpCode::CallExt;
                    const auto arity = ext ? m.externalOps[arg].sig.params.size() : m.definedOps[arg].sig.params.size();
                    std::vector<Value> args(stack.end() - static_cast<std::ptrdiff_t>(arity), stack.end());
                    stack.resize(stack.size() - arity);
                    if (ext)
                        callExternal(arg, args);
                    else
                        callDefined(arg, args);
                    break;
                }
            }
        }
        return stack;
    }

    bool eval(const Program& p, std::span<const Value> params) { return truth(run(p, params).back()); }

    void exec(const std::optional<Program>& p, std::span<const Value> params) {
        if (p) run(*p, params);
    }

    void checkPre(const std::optional<Program>& pre, const std::string& name, std::span<const Value> args) {
        if (pre && !eval(*pre, args)) throw FaultSignal{{FaultKind::PreconditionViolation, name}};
    }

    void checkPost(const std::optional<Program>& post, const std::string& name, std::span<const Value> args) {
        if (!post || eval(*post, args)) return;
        if (!ctx.config_.postconditionWarnings) throw FaultSignal{{FaultKind::PostconditionViolation, name}};
        rec.warnings.push_back("postconditionViolation " + name);
    }

    void callExternal(std::size_t k, const std::vector<Value>& args) {
        const auto& op = ctx.machine_->externalOps[k];
        rec.ops.push_back({op.sig.name, args});
        checkPre(op.pre, op.sig.name, args);
        for (auto& w : ctx.platform_->invoke({*ctx.machine_, k, args, ctx.vars_})) ctx.setVar(w.slot, std::move(w.value));
        checkPost(op.post, op.sig.name, args);
    }

    void callDefined(std::size_t k, const std::vector<Value>& args) {
        const auto& op = ctx.machine_->definedOps[k];
        rec.ops.push_back({op.sig.name, args});
        checkPre(op.pre, op.sig.name, args);
        if (++depth > kMaxCallDepth) throw FaultSignal{{FaultKind::StepBudgetExceeded, op.sig.name}};
        const auto& body = op.body;
        std::size_t state = body.initial;
        exec(body.states[state].entry, args);
        std::size_t steps = 0;
        while (!body.states[state].isFinal) {
            if (++steps > ctx.config_.stepBudget) throw FaultSignal{{FaultKind::StepBudgetExceeded, op.sig.name}};
            if (auto t = selectTransition(body, state, args)) {
                const auto& tr = body.transitions[*t];
                exec(body.states[state].exit, args);
                exec(tr.action, args);
                state = tr.target;
                exec(body.states[state].entry, args);
            } else {
                exec(body.states[state].during, args);
            }
        }
        --depth;
        checkPost(op.post, op.sig.name, args);
    }

    std::optional<std::size_t> selectTransition(const MachineBody& body, std::size_t state, std::span<const Value> params) {
        for (std::size_t i = 0; i < body.transitions.size(); ++i) {
            const auto& t = body.transitions[i];
            if (t.source != state) continue;
            if (t.event && !ctx.flags_[*t.event]) continue;
            if (t.guard && !eval(*t.guard, params)) continue;
            return i;
        }
        return std::nullopt;
    }
};

ExecutionContext::ExecutionContext(const CompiledMachine& m, PlatformBinding& p, RuntimeConfig c)
    : machine_(&m), platform_(&p), config_(std::move(c)), state_(m.body.initial), clocks_(m.clocks.size(), 0),
      flags_(m.events.size(), false) {
    for (const auto& v : m.vars) vars_.push_back(v.init);
}

const Value& ExecutionContext::var(std::string_view name) const {
    auto i = machine_->varIndex(name);
    if (!i) throw std::out_of_range("no variable '" + std::string(name) + "'");
    return vars_[*i];
}

void ExecutionContext::setVar(std::size_t slot, Value v) {
    if (slot >= vars_.size()) throw std::out_of_range("variable slot out of range");
    if (typeOf(v) != machine_->vars[slot].type)
        throw std::invalid_argument("value of type " + std::string(typeName(typeOf(v))) + " written to variable '" +
                                    machine_->vars[slot].name + "'");
    vars_[slot] = std::move(v);
}

TraceRecord ExecutionContext::step(std::span<const std::size_t> injected) {
    if (status_ != Status::Running) throw RuntimeError("step on a context that is no longer running");
    const auto& m = *machine_;
    TraceRecord rec;
    rec.cycle = cycle_;
    rec.stateBefore = m.body.states[state_].name;

    flags_.assign(m.events.size(), false);
    platform_->publishEvents(m, vars_, flags_);
    for (auto e : injected) flags_.at(e) = true;
    for (std::size_t i = 0; i < flags_.size(); ++i)
        if (flags_[i]) rec.events.push_back(m.events[i]);

    Interp in{*this, rec};
    try {
        if (entryPending_) {
            entryPending_ = false;
            in.exec(m.body.states[state_].entry, {});
        }
        if (!m.body.states[state_].isFinal) {
            if (auto t = in.selectTransition(m.body, state_, {})) {
                const auto& tr = m.body.transitions[*t];
                rec.fired = *t;
                in.exec(m.body.states[state_].exit, {});
                in.exec(tr.action, {});
                state_ = tr.target;
                in.exec(m.body.states[state_].entry, {});
            } else {
                in.exec(m.body.states[state_].during, {});
            }
        }
    } catch (const FaultSignal& f) {
        fault_ = f.fault;
        status_ = Status::Faulted;
        rec.fault = f.fault.describe();
    }

    rec.stateAfter = m.body.states[state_].name;
    for (auto slot : watchSlots_) rec.watch.emplace_back(m.vars[slot].name, vars_[slot]);
    if (status_ == Status::Running) {
        if (m.body.states[state_].isFinal) status_ = Status::Finished;
        ++cycle_;
        for (auto& c : clocks_) ++c;
    }
    return rec;
}

ExecutionContext createContext(const CompiledMachine& machine, PlatformBinding& platform, RuntimeConfig config) {
    if (!(config.timeUnit > 0.0) || !std::isfinite(config.timeUnit))
        throw RuntimeError("time unit must be a positive number of time units per cycle");
    std::string missing;
    for (const auto& op : machine.externalOps)
        if (!platform.binds(op.sig.name)) missing += (missing.empty() ? "" : ", ") + op.sig.name;
    if (!missing.empty()) throw RuntimeError("unbound external operations: " + missing);
    ExecutionContext ctx(machine, platform, std::move(config));
    for (const auto& w : ctx.config_.watch) {
        auto slot = machine.varIndex(w);
        if (!slot) throw RuntimeError("watched variable '" + w + "' does not exist");
        ctx.watchSlots_.push_back(*slot);
    }
    return ctx;
}

std::vector<TraceRecord> runScript(ExecutionContext& ctx, const EventScript& script, std::uint64_t maxCycles) {
    std::vector<std::vector<std::size_t>> resolved;
    for (const auto& cycle : script.cycles) {
        auto& ids = resolved.emplace_back();
        for (const auto& name : cycle) {
            auto e = ctx.machine().eventIndex(name);
            if (!e) throw RuntimeError("script raises unknown event '" + name + "'");
            ids.push_back(*e);
        }
    }
    std::vector<TraceRecord> trace;
    const std::vector<std::size_t> quiet;
    while (trace.size() < maxCycles && ctx.status() == Status::Running) {
        const auto i = trace.size();
        trace.push_back(ctx.step(i < resolved.size() ? resolved[i] : quiet));
    }
    return trace;
}

}  // namespace smforge
