#pragma once

#include "smforge/value.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace smforge {

/// Instruction set of compiled expressions and action sequences. Programs are
/// postfix over a value stack; jumps are forward-only and absolute.
enum class OpCode : std::uint8_t {
    PushLit,      // push `lit`
    LoadVar,      // push variable slot `arg`
    LoadParam,    // push parameter `arg` of the innermost operation frame
    LoadClock,    // push since(clock `arg`) as real
    StoreVar,     // pop into variable slot `arg`
    ResetClock,   // clock `arg` := 0
    IntToReal,
    Not,
    Neg,
    Add,
    Sub,
    Mul,
    Div,
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
    MakeVec,      // pop y, pop x, push (x, y)
    Jump,         // pc := arg
    JumpIfFalse,  // pop; if false pc := arg
    JumpIfTrue,   // pop; if true pc := arg
    CallExt,      // pop arity(arg) arguments, invoke external operation `arg`
    CallDef,      // pop arity(arg) arguments, run defined operation `arg`
};

std::string_view mnemonic(OpCode op);
std::optional<OpCode> opcodeFromMnemonic(std::string_view text);

struct Instr {
    OpCode op = OpCode::PushLit;
    std::int64_t arg = 0;
    Value lit{false};

    bool operator==(const Instr&) const = default;
};

struct Program {
    std::vector<Instr> code;

    bool operator==(const Program&) const = default;
};

enum class ProgramKind {
    Expression,  // leaves exactly one value
    Action,      // leaves the stack as it found it
};

/// Index bounds a program must respect.
struct ProgramLimits {
    std::size_t vars = 0;
    std::size_t params = 0;
    std::size_t clocks = 0;
    std::span<const std::size_t> externalArity;
    std::span<const std::size_t> definedArity;
};

/// Static stack-balance and operand-range check. Returns a reason on failure.
std::optional<std::string> verifyProgram(const Program& program, ProgramKind kind, const ProgramLimits& limits);

}  // namespace smforge
