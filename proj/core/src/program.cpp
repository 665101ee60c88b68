#include "smforge/program.hpp"

#include <array>
#include <utility>

namespace smforge {

namespace {

constexpr std::array<std::pair<OpCode, std::string_view>, 25> kMnemonics = {{
    {OpCode::PushLit, "push"},     {OpCode::LoadVar, "load"},     {OpCode::LoadParam, "param"},
    {OpCode::LoadClock, "since"},  {OpCode::StoreVar, "store"},   {OpCode::ResetClock, "reset"},
    {OpCode::IntToReal, "i2r"},    {OpCode::Not, "not"},          {OpCode::Neg, "neg"},
    {OpCode::Add, "add"},          {OpCode::Sub, "sub"},          {OpCode::Mul, "mul"},
    {OpCode::Div, "div"},          {OpCode::Eq, "eq"},            {OpCode::Ne, "ne"},
    {OpCode::Lt, "lt"},            {OpCode::Le, "le"},            {OpCode::Gt, "gt"},
    {OpCode::Ge, "ge"},            {OpCode::MakeVec, "vec"},      {OpCode::Jump, "jmp"},
    {OpCode::JumpIfFalse, "jf"},   {OpCode::JumpIfTrue, "jt"},    {OpCode::CallExt, "callx"},
    {OpCode::CallDef, "calld"},
}};

}  // namespace

std::string_view mnemonic(OpCode op) {
    for (const auto& [code, text] : kMnemonics)
        if (code == op) return text;
    return "?";
}

std::optional<OpCode> opcodeFromMnemonic(std::string_view text) {
    for (const auto& [code, name] : kMnemonics)
        if (name == text) return code;
    return std::nullopt;
}

std::optional<std::string> verifyProgram(const Program& program, ProgramKind kind, const ProgramLimits& limits) {
    const auto& code = program.code;
    const auto n = code.size();
    // depth[pc] = stack depth on entry to pc; -1 = not yet reached.
    std::vector<long> depth(n + 1, -1);
    depth[0] = 0;

    auto where = [](std::size_t pc) { return "at " + std::to_string(pc) + ": "; };
    auto inRange = [](std::int64_t v, std::size_t bound) { return v >= 0 && static_cast<std::size_t>(v) < bound; };

    auto flow = [&](std::size_t to, long d) -> std::optional<std::string> {
        if (depth[to] == -1) {
            depth[to] = d;
        } else if (depth[to] != d) {
            return "inconsistent stack depth at join " + std::to_string(to);
        }
        return std::nullopt;
    };

    for (std::size_t pc = 0; pc < n; ++pc) {
        long d = depth[pc];
        if (d < 0) return where(pc) + "unreachable instruction";
        const auto& ins = code[pc];
        long pops = 0;
        long pushes = 0;
        std::optional<std::size_t> jumpTo;
        bool fallsThrough = true;
        switch (ins.op) {
            case OpCode::PushLit: pushes = 1; break;
            case OpCode::LoadVar:
                if (!inRange(ins.arg, limits.vars)) return where(pc) + "variable slot out of range";
                pushes = 1;
                break;
            case OpCode::LoadParam:
                if (!inRange(ins.arg, limits.params)) return where(pc) + "parameter out of range";
                pushes = 1;
                break;
            case OpCode::LoadClock:
                if (!inRange(ins.arg, limits.clocks)) return where(pc) + "clock out of range";
                pushes = 1;
                break;
            case OpCode::StoreVar:
                if (!inRange(ins.arg, limits.vars)) return where(pc) + "variable slot out of range";
                pops = 1;
                break;
            case OpCode::ResetClock:
                if (!inRange(ins.arg, limits.clocks)) return where(pc) + "clock out of range";
                break;
            case OpCode::IntToReal:
            case OpCode::Not:
            case OpCode::Neg:
                pops = 1;
                pushes = 1;
                break;
            case OpCode::Add:
            case OpCode::Sub:
            case OpCode::Mul:
            case OpCode::Div:
            case OpCode::Eq:
            case OpCode::Ne:
            case OpCode::Lt:
            case OpCode::Le:
            case OpCode::Gt:
            case OpCode::Ge:
            case OpCode::MakeVec:
                pops = 2;
                pushes = 1;
                break;
            case OpCode::Jump:
                fallsThrough = false;
                [[fallthrough]];
            case OpCode::JumpIfFalse:
            case OpCode::JumpIfTrue:
                if (ins.arg <= static_cast<std::int64_t>(pc) || ins.arg > static_cast<std::int64_t>(n))
                    return where(pc) + "jump target must be forward and inside the program";
                jumpTo = static_cast<std::size_t>(ins.arg);
                if (ins.op != OpCode::Jump) pops = 1;
                break;
            case OpCode::CallExt:
                if (!inRange(ins.arg, limits.externalArity.size())) return where(pc) + "external op out of range";
                pops = static_cast<long>(limits.externalArity[static_cast<std::size_t>(ins.arg)]);
                break;
            case OpCode::CallDef:
                if (!inRange(ins.arg, limits.definedArity.size())) return where(pc) + "defined op out of range";
                pops = static_cast<long>(limits.definedArity[static_cast<std::size_t>(ins.arg)]);
                break;
        }
        if (d < pops) return where(pc) + "stack underflow";
        const long next = d - pops + pushes;
        if (jumpTo)
            if (auto err = flow(*jumpTo, next)) return err;
        if (fallsThrough)
            if (auto err = flow(pc + 1, next)) return err;
    }
    const long expected = kind == ProgramKind::Expression ? 1 : 0;
    if (depth[n] != expected)
        return "program leaves " + std::to_string(depth[n]) + " value(s), expected " + std::to_string(expected);
    return std::nullopt;
}

}  // namespace smforge
