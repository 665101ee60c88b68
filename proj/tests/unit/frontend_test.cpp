#include "smforge/corpus.hpp"
#include "smforge/lexer.hpp"
#include "smforge/parser.hpp"

#include <doctest.h>

using namespace smforge;

namespace {

bool hasCode(const std::vector<Diagnostic>& ds, std::string_view code, std::string_view fragment = {}) {
    for (const auto& d : ds)
        if (d.code == code && d.message.find(fragment) != std::string::npos) return true;
    return false;
}

}  // namespace

TEST_SUITE("lexer") {
    TEST_CASE("keywords, numbers and punctuation") {
        const auto r = tokenize("state S1 [since(T) >= 25.5] -> := // comment\n#T");
        REQUIRE(r.diagnostics.empty());
        std::vector<std::string> texts;
        for (const auto& t : r.tokens) texts.push_back(t.text);
        CHECK(texts == std::vector<std::string>{"state", "S1", "[", "since", "(", "T", ")", ">=", "25.5", "]", "->",
                                                ":=", "#", "T", ""});
        CHECK(r.tokens[0].kind == TokenKind::Keyword);
        CHECK(r.tokens[1].kind == TokenKind::Identifier);
        CHECK(r.tokens[8].kind == TokenKind::Real);
        CHECK(r.tokens.back().kind == TokenKind::EndOfInput);
        CHECK(r.tokens[13].span.line == 2);
    }

    TEST_CASE("every stray character is reported and lexing continues") {
        const auto r = tokenize("state $ A @ B");
        CHECK(r.diagnostics.size() == 2);
        CHECK(r.diagnostics[0].code == "P01");
        CHECK(r.tokens.size() == 4);
    }
}

TEST_SUITE("parser") {
    TEST_CASE("smallest legal machine") {
        const auto r = parse("machine M { initial state A {} }");
        REQUIRE(r.ok());
        REQUIRE(r.unit->machines.size() == 1);
        const auto& m = r.unit->machines[0];
        CHECK(m.name == "M");
        CHECK(m.states.size() == 1);
        CHECK(m.initial == "A");
    }

    TEST_CASE("aggregation corpus shape") {
        const auto r = parse(corpus::aggregationSource(), "aggregation.rcm");
        REQUIRE(r.ok());
        const auto* m = r.unit->findMachine("AggregationFSM");
        REQUIRE(m);
        REQUIRE(m->required.size() == 1);
        CHECK(m->required[0].name == "AggregationIface");
        CHECK(m->states.size() == 2);
        const auto* iface = r.unit->findInterface("AggregationIface");
        REQUIRE(iface);
        CHECK(iface->events.size() == 2);
        CHECK(iface->operations.size() == 2);
        CHECK(r.unit->operations.size() == 2);
        CHECK(r.unit->modules.size() == 1);
    }

    TEST_CASE("structural errors") {
        CHECK(hasCode(parse("machine M { state A {} }").diagnostics, "P03", "no initial state"));
        CHECK(hasCode(parse("machine M { initial state A {} initial state B {} }").diagnostics, "P03",
                      "duplicate initial"));
        CHECK(hasCode(parse("machine M { initial state A {} final state F {} transition F -> A }").diagnostics, "P03",
                      "leaves final"));
        CHECK(hasCode(parse("operation Op() { initial state A {} }").diagnostics, "P03", "no final state"));
        CHECK(hasCode(parse("module X { platform P; }").diagnostics, "P03", "no controller"));
    }

    TEST_CASE("syntax errors carry a location and no tree") {
        const auto r = parse("machine M {\n  initial state A {\n}", "m.rcm");
        CHECK_FALSE(r.ok());
        REQUIRE(r.diagnostics.size() == 1);
        CHECK(r.diagnostics[0].code == "P02");
        CHECK(r.diagnostics[0].span.file == "m.rcm");
    }

    TEST_CASE("operator precedence and associativity") {
        const auto r = parse("machine M { var x : real = 0.0 initial state A { during x := 1 - 2 - 3 * 4 / 5 } }");
        REQUIRE(r.ok());
        const auto& e = r.unit->machines[0].states[0].during->at(0).args[0];
        CHECK(renderExpr(e) == "1 - 2 - 3 * 4 / 5");
        REQUIRE(e.kind == ast::ExprKind::Binary);
        CHECK(e.binary == ast::BinaryOp::Sub);
        CHECK(e.operands[0].binary == ast::BinaryOp::Sub);
        CHECK(e.operands[1].binary == ast::BinaryOp::Div);
    }

    TEST_CASE("rendering is parenthesized only where needed") {
        const auto r = parse(
            "machine M { var b : boolean = false var x : real = 0.0 initial state A {"
            " during x := (1 - (2 - 3)) * -x; b := not (b and (b or b)) } }");
        REQUIRE(r.ok());
        const auto& during = *r.unit->machines[0].states[0].during;
        CHECK(renderExpr(during[0].args[0]) == "(1 - (2 - 3)) * -x");
        CHECK(renderExpr(during[1].args[0]) == "not (b and (b or b))");
    }
}

TEST_SUITE("render round trip") {
    TEST_CASE("smallest machine") {
        const auto a = parse("machine M { initial state A {} }");
        const auto b = parse(render(*a.unit));
        REQUIRE(b.ok());
        CHECK(ast::sameShape(*a.unit, *b.unit));
    }

    TEST_CASE("corpus models") {
        for (auto src : {corpus::aggregationSource(), corpus::taxisSource()}) {
            const auto a = parse(src);
            REQUIRE(a.ok());
            const auto text = render(*a.unit);
            const auto b = parse(text);
            REQUIRE_MESSAGE(b.ok(), text);
            CHECK(ast::sameShape(*a.unit, *b.unit));
        }
    }
}
