#include "smforge/compiler.hpp"
#include "smforge/corpus.hpp"

#include <doctest.h>

using namespace smforge;

namespace {

ResolvedModel checked(std::string_view src) {
    auto r = checkSource(src, "t.rcm");
    REQUIRE_MESSAGE(r.model, formatDiagnostics(r.diagnostics));
    return std::move(*r.model);
}

std::vector<std::string> mnemonics(const Program& p) {
    std::vector<std::string> out;
    for (const auto& in : p.code) out.emplace_back(mnemonic(in.op));
    return out;
}

}  // namespace

TEST_CASE("aggregation tables") {
    const auto cm = compile(checked(corpus::aggregationSource()), corpus::kAggregationMachine);
    CHECK(cm.name == "AggregationFSM");
    REQUIRE(cm.body.states.size() == 2);
    CHECK(cm.body.states[cm.body.initial].name == "S1");
    CHECK(cm.events == std::vector<std::string>{"seeWall", "seeRobot"});
    CHECK(cm.body.transitions.size() >= 2);
    CHECK(cm.clocks.empty());
    CHECK(cm.externalOps.size() + cm.definedOps.size() == 2);
    CHECK(cm.definedIndex("MoveClockwise"));
    CHECK(cm.definedIndex("RotateClockwise"));
    CHECK(cm.vars.size() == 8);
    CHECK_NOTHROW(cm.validate());
}

TEST_CASE("taxis tables") {
    const auto cm = compile(checked(corpus::taxisSource()), corpus::kTaxisMachine);
    CHECK(cm.body.states.size() == 3);
    CHECK(cm.clocks == std::vector<std::string>{"T"});
    CHECK(cm.body.transitions.size() == 4);
    CHECK(cm.definedIndex("UpdateAvoidanceRadius"));
    CHECK(cm.externalIndex("CheckIlluminationStatus"));
    CHECK(cm.externalIndex("Turn"));
    CHECK_FALSE(cm.externalIndex("UpdateAvoidanceRadius"));
}

TEST_CASE("one state and no transitions") {
    const auto cm = compile(checked("machine M { initial state A {} }"), "M");
    CHECK(cm.body.states.size() == 1);
    CHECK(cm.body.transitions.empty());
}

TEST_CASE("unknown machine") {
    CHECK_THROWS_AS(compile(checked("machine M { initial state A {} }"), "Nope"), CompileError);
}

TEST_CASE("integers are promoted where a real is expected") {
    const auto cm = compile(checked("machine M { var x : real = 0.0 var n : int = 2 initial state A { during x := n * 3 } }"), "M");
    CHECK(mnemonics(*cm.body.states[0].during) ==
          std::vector<std::string>{"load", "push", "mul", "i2r", "store"});
    const auto mixed = compile(checked("machine M { var x : real = 0.0 var n : int = 2 initial state A { during x := n + x } }"), "M");
    CHECK(mnemonics(*mixed.body.states[0].during) ==
          std::vector<std::string>{"load", "i2r", "load", "add", "store"});
}

TEST_CASE("boolean connectives short-circuit") {
    const auto cm = compile(
        checked("machine M { var b : boolean = false var n : int = 0 initial state A { during b := n != 0 and 1 / n > 1 } }"),
        "M");
    const auto& p = *cm.body.states[0].during;
    const auto m = mnemonics(p);
    REQUIRE(m.size() > 4);
    CHECK(m[3] == "jf");
    const auto s = static_cast<std::size_t>(p.code[3].arg);
    CHECK(p.code[s].op == OpCode::PushLit);
    CHECK(p.code[s].lit == Value{false});
    CHECK(p.code[s - 1].op == OpCode::Jump);
}

TEST_CASE("table invariants are enforced") {
    auto cm = compile(checked(corpus::aggregationSource()), corpus::kAggregationMachine);
    auto broken = cm;
    broken.body.transitions[0].target = 7;
    CHECK_THROWS_AS(broken.validate(), std::invalid_argument);
    broken = cm;
    broken.body.initial = 5;
    CHECK_THROWS_AS(broken.validate(), std::invalid_argument);
    broken = cm;
    broken.body.states[0].during->code.push_back({OpCode::PushLit, 0, Value{true}});
    CHECK_THROWS_AS(broken.validate(), std::invalid_argument);
}

TEST_CASE("program verifier") {
    ProgramLimits limits;
    limits.vars = 1;
    Program ok{{{OpCode::PushLit, 0, Value{std::int64_t{1}}}, {OpCode::StoreVar, 0, Value{false}}}};
    CHECK_FALSE(verifyProgram(ok, ProgramKind::Action, limits));
    CHECK(verifyProgram(ok, ProgramKind::Expression, limits));
    Program outOfRange{{{OpCode::LoadVar, 3, Value{false}}}};
    CHECK(verifyProgram(outOfRange, ProgramKind::Expression, limits));
    Program backwards{{{OpCode::PushLit, 0, Value{true}}, {OpCode::Jump, 0, Value{false}}}};
    CHECK(verifyProgram(backwards, ProgramKind::Expression, limits));
}

TEST_CASE("mnemonics round trip") {
    for (int i = 0; i <= static_cast<int>(OpCode::CallDef); ++i) {
        const auto op = static_cast<OpCode>(i);
        CHECK(opcodeFromMnemonic(mnemonic(op)) == op);
    }
    CHECK_FALSE(opcodeFromMnemonic("bogus"));
}
