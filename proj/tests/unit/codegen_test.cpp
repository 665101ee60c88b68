#include "smforge/codegen.hpp"
#include "smforge/compiler.hpp"
#include "smforge/corpus.hpp"

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace smforge;

namespace {

struct Generated {
    ResolvedModel model;
    std::vector<GeneratedUnit> units;
};

Generated generate(std::string_view src, std::string_view machine) {
    auto r = checkSource(src, "t.rcm");
    REQUIRE(r.model);
    const auto cm = compile(*r.model, machine);
    std::vector<const ast::InterfaceDecl*> ifaces;
    for (const auto& req : r.model->unit.findMachine(machine)->required)
        ifaces.push_back(r.model->unit.findInterface(req.name));
    auto units = emitUnits(cm, ifaces);
    return {std::move(*r.model), std::move(units)};
}

const GeneratedUnit* unit(const Generated& g, std::string_view name) {
    for (const auto& u : g.units)
        if (u.name == name) return &u;
    return nullptr;
}

/// Compares against tests/golden/<name>.gen.txt; SMFORGE_UPDATE_GOLDEN=1 rewrites it.
void checkGolden(const GeneratedUnit& u, const std::string& prefix) {
    const auto path = std::filesystem::path(SMFORGE_GOLDEN_DIR) / (prefix + u.name + std::string(kGeneratedExtension));
    if (const char* update = std::getenv("SMFORGE_UPDATE_GOLDEN"); update && std::string(update) == "1") {
        std::ofstream(path, std::ios::binary) << u.text;
        return;
    }
    std::ifstream in(path, std::ios::binary);
    REQUIRE_MESSAGE(in, "missing golden file " << path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    CHECK(ss.str() == u.text);
}

bool contains(const std::string& text, std::string_view fragment) {
    return text.find(fragment) != std::string::npos;
}

}  // namespace

TEST_CASE("aggregation classes") {
    const auto g = generate(corpus::aggregationSource(), corpus::kAggregationMachine);
    REQUIRE(g.units.size() == 2);
    const auto* iface = unit(g, "AggregationIface");
    const auto* fsm = unit(g, "AggregationFSM");
    REQUIRE(iface);
    REQUIRE(fsm);
    CHECK(contains(iface->text, "class AggregationIface {"));
    CHECK(contains(iface->text, "enum class Event { seeWall, seeRobot };"));
    CHECK(contains(iface->text, "virtual void MoveClockwise(double angular, double linear);"));
    CHECK(contains(fsm->text, "class AggregationFSM : public AggregationIface {"));
    CHECK(contains(fsm->text, "enum class State { S1, S2 };"));
    CHECK(contains(fsm->text, "void MakeTransition();"));
    CHECK(contains(fsm->text, "void MoveClockwise(double angular, double linear) override;"));
    CHECK(contains(fsm->text, "assert(angular < 0.0 && linear != 0.0);"));
    for (const auto& u : g.units) checkGolden(u, "aggregation_");
}

TEST_CASE("taxis timer") {
    const auto g = generate(corpus::taxisSource(), corpus::kTaxisMachine);
    const auto* timer = unit(g, "Timer");
    REQUIRE(timer);
    CHECK(contains(timer->text, "counter"));
    CHECK(contains(timer->text, "StartTimer"));
    CHECK(contains(timer->text, "ResetTimer"));
    const auto* fsm = unit(g, "SwarmTaxisFSM");
    REQUIRE(fsm);
    CHECK(contains(fsm->text, "Timer T;"));
    CHECK(contains(fsm->text, "T.StartTimer();"));
    CHECK((contains(fsm->text, "if (double(T.counter) >= 25.0) {") || contains(fsm->text, "T.counter >= ")));
    CHECK(contains(fsm->text, "T.ResetTimer();"));
    CHECK(contains(fsm->text, "T.Tick();"));
    for (const auto& u : g.units) checkGolden(u, "taxis_");
}

TEST_CASE("minimal machine is stable") {
    const auto a = generate("machine M { initial state A {} }", "M");
    const auto b = generate("machine M { initial state A {} }", "M");
    REQUIRE(a.units.size() == 1);
    CHECK(a.units[0].text == b.units[0].text);
    checkGolden(a.units[0], "minimal_");
}

TEST_CASE("expression text keeps precedence") {
    const auto g = generate(R"(
machine M {
    var a : int = 1
    var b : boolean = false
    var r : real = 0.0
    var v : vector2d = (0.0, 0.0)
    initial state A {
        during r := (a - (a - a)) * 2; b := not (b or a > 1) and (b ? true : a == 2); v := (r, a) * -r
    }
}
)",
                            "M");
    const auto& text = g.units[0].text;
    CHECK(contains(text, "r = double((a - (a - a)) * 2);"));
    CHECK(contains(text, "b = !(b || a > 1) && (b ? true : a == 2);"));
    CHECK(contains(text, "v = Vector2d(r, double(a)) * -r;"));
}
