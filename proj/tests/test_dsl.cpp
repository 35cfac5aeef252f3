#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "jbcli/dsl.hpp"
#include "structures/structures.hpp"
#include "varcalc/varcalc.hpp"

#include <string>
#include <vector>

using namespace jbcli;
using namespace jetalg;

namespace {
DiffPoly at1(Atom a) { return DiffPoly::atom(1, a); }
} // namespace

TEST_CASE("declarations: functional fixture, bare jets, component count")
{
    SourceFile f = parse("P1 = int( (1/2) * th * th1 );");
    REQUIRE(f.decls.size() == 1);
    CHECK(f.decls[0].first == "P1");
    CHECK(f.decls[0].second.integrated);
    DiffPoly expect = mul(at1(atom_odd(1, 0)), at1(atom_odd(1, 1))) * rat(1, 2);
    CHECK(f.decls[0].second.density == expect);
    CHECK(f.components == 1);

    SourceFile g = parse("x = u[1,0];");
    CHECK(g.decls[0].second.density == at1(atom_even(1, 0)));
    CHECK(!g.decls[0].second.integrated);

    SourceFile m = parse("m = u[2,1] * th[1,0];");
    CHECK(m.components == 2);
    CHECK(m.decls[0].second.density
        == mul(DiffPoly::atom(2, atom_even(2, 1)), DiffPoly::atom(2, atom_odd(1, 0))));
}

TEST_CASE("expressions: shorthands, powers, precedence, unary minus, references")
{
    SourceFile f = parse(
        "a = u1^2 * th2 - 3 * u;\n"
        "b = -a + 2/4 * u1^2*th2;\n");
    DiffPoly a = mul(dp_pow(at1(atom_even(1, 1)), 2), at1(atom_odd(1, 2)))
        - at1(atom_even(1, 0)) * rat(3);
    CHECK(f.decls[0].second.density == a);
    DiffPoly b = -a + mul(dp_pow(at1(atom_even(1, 1)), 2), at1(atom_odd(1, 2))) * rat(1, 2);
    CHECK(f.decls[1].second.density == b);
}

TEST_CASE("function symbols take primes once declared with func")
{
    SourceFile f = parse("func c;\nq = c'' * u1 + c * th * th1;");
    CHECK(f.functions == std::vector<std::string> { "c" });
    SymbolId id = symbol_id("c");
    DiffPoly expect = at1(atom_even(1, 1)) * Coefficient::variable(symjet1(id, 2))
        + mul(at1(atom_odd(1, 0)), at1(atom_odd(1, 1)))
            * Coefficient::variable(symjet1(id, 0));
    CHECK(f.decls[0].second.density == expect);
}

TEST_CASE("parse errors carry 1-based line:col positions")
{
    struct Case {
        const char* text;
        int line, col;
    };
    const Case cases[] = {
        { "y = u1 *;", 1, 9 },         // dangling operator hits ';'
        { "z = w + 1;", 1, 5 },        // unknown symbol
        { "z = c' * u;", 1, 5 },       // primes on an undeclared symbol
        { "func c; c = u;", 1, 9 },    // duplicate name
        { "u1 = u;", 1, 1 },           // reserved jet spelling
        { "int = u;", 1, 1 },          // keyword as declaration name
        { "z = int(int(u));", 1, 5 },  // nested integral
        { "z = int(u) * u;", 1, 12 },  // functional times density
        { "z = int(u) + u;", 1, 12 },  // functional plus density
        { "z = int(u)^2;", 1, 11 },    // functional power
        { "z = u[0,1];", 1, 5 },       // component out of range
        { "z = 1/0;", 1, 5 },          // zero denominator
        { "z = u +;", 1, 8 },          // missing operand
    };
    for (const Case& c : cases) {
        CAPTURE(c.text);
        bool threw = false;
        try {
            parse(c.text);
        } catch (const ParseError& e) {
            threw = true;
            CHECK(e.line == c.line);
            CHECK(e.col == c.col);
        }
        CHECK(threw);
    }
}

TEST_CASE("render/parse round trip on the fixture densities")
{
    structures::PoissonPair pairs[] = { structures::dkdv_pair(),
        structures::kdv_pair(), structures::ch_pair() };
    SourceFile f;
    f.components = 1;
    int k = 0;
    for (const auto& p : pairs) {
        f.decls.emplace_back("A" + std::to_string(k++), Value { p.P1.density, true });
        f.decls.emplace_back("A" + std::to_string(k++), Value { p.P2.density, true });
    }
    structures::DeformationSeries lor = structures::deformed_pair(
        Coefficient::variable(uvar(1)), 4);
    f.decls.emplace_back("L4", Value { lor.corrections.at(4).density, true });
    SymbolId id = register_symbol("c");
    f.functions.push_back("c");
    structures::DeformationSeries sym = structures::deformed_pair(
        Coefficient::variable(symjet1(id, 0)), 2);
    f.decls.emplace_back("S2", Value { sym.corrections.at(2).density, true });

    std::string text = render(f);
    SourceFile g = parse(text);
    CHECK(g.functions == f.functions);
    REQUIRE(g.decls.size() == f.decls.size());
    for (std::size_t i = 0; i < f.decls.size(); ++i) {
        CHECK(g.decls[i].first == f.decls[i].first);
        CHECK(g.decls[i].second == f.decls[i].second);
    }
    CHECK(render(g) == text); // idempotent pretty-printing
}

TEST_CASE("parse_expression resolves jets, symbols and declarations in scope")
{
    SourceFile f = parse("func c;\nH = int(u^2);");
    Value v = parse_expression("c' * u1 + u", f);
    CHECK(!v.integrated);
    Value w = parse_expression("2 * H", f);
    CHECK(w.integrated);
    CHECK(w.density == dp_pow(at1(atom_even(1, 0)), 2) * rat(2));
    CHECK_THROWS_AS(parse_expression("u1 *", f), ParseError);
}
