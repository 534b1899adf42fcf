#include <catch2/catch_amalgamated.hpp>

#include "etaricci/parser.hpp"

#include "test_support.hpp"

using namespace etaricci;

namespace {
ContextPtr ctx() { return make_context({"t", "x", "y"}); }
} // namespace

TEST_CASE("operator precedence and associativity") {
    auto c = ctx();
    CHECK(parse_expr("1+2*3", c) == ScalarExpr::constant(c, Rat(7)));
    CHECK(parse_expr("6/2/3", c) == ScalarExpr::constant(c, Rat(1)));
    CHECK(parse_expr("2^3", c) == ScalarExpr::constant(c, Rat(8)));
    CHECK(parse_expr("2*x^2", c) == parse_expr("2*(x^2)", c));
    CHECK(parse_expr("3/2*x", c) == parse_expr("(3/2)*x", c));
    CHECK(parse_expr("1 - 2 - 3", c) == ScalarExpr::constant(c, Rat(-4)));
    CHECK(parse_expr("x^-2", c) == ScalarExpr::one(c) / parse_expr("x^2", c));
}

TEST_CASE("unary minus applies to the leading term") {
    auto c = ctx();
    CHECK(parse_expr("-x", c) == -ScalarExpr::coordinate(c, 1));
    CHECK(parse_expr("-x + y", c) == parse_expr("y - x", c));
    CHECK(parse_expr("-2*x/y", c) ==
          -(ScalarExpr::constant(c, Rat(2)) * ScalarExpr::coordinate(c, 1)) /
              ScalarExpr::coordinate(c, 2));
}

TEST_CASE("exponential arguments must be rational linear forms") {
    auto c = ctx();
    CHECK_NOTHROW(parse_expr("exp(t/2 + 3*x)", c));
    CHECK_NOTHROW(parse_expr("exp(-t)", c));
    CHECK(parse_expr("exp(t/2)*exp(t/2)", c) == parse_expr("exp(t)", c));
    CHECK_THROWS_AS(parse_expr("exp(t*t)", c), ParseError);
    CHECK_THROWS_AS(parse_expr("exp(1+t)", c), ParseError);
    CHECK_THROWS_AS(parse_expr("exp(2)", c), ParseError);
    CHECK_THROWS_AS(parse_expr("exp(exp(t))", c), ParseError);
}

TEST_CASE("errors carry the offset of the problem") {
    auto c = ctx();
    try {
        parse_expr("x + qq*2", c);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.offset == 4);
    }
    try {
        parse_expr("x + ", c);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.offset == 4);
    }
    CHECK_THROWS_AS(parse_expr("(x", c), ParseError);
    CHECK_THROWS_AS(parse_expr("x )", c), ParseError);
    CHECK_THROWS_AS(parse_expr("x ^ y", c), ParseError);
}

TEST_CASE("printing round-trips through the grammar") {
    auto c = ctx();
    for (const char* text : {
             "0",
             "1",
             "-1",
             "x/2",
             "1/x^2",
             "(x + y)/(x - y)",
             "2*x*y^2 - 7",
             "exp(2*t)",
             "(3*exp(t - x) + 1)/(2*y)",
             "-x - y - 1",
             "1/(x*y)",
             "(x + 1)/(2*x^2 + 2)",
         }) {
        ScalarExpr e = parse_expr(text, c);
        CHECK(parse_expr(e.str(), c) == e);
    }
}

TEST_CASE("random print/parse fixed point including divisions") {
    testsupport::Rng rng(99);
    auto c = ctx();
    for (int it = 0; it < 80; ++it) {
        ScalarExpr e = testsupport::random_expr(c, rng, true);
        INFO(e.str());
        ScalarExpr round = parse_expr(e.str(), c);
        CHECK(round == e);
        CHECK(round.str() == e.str());
    }
}

TEST_CASE("linear form parsing for generator declarations") {
    auto c = ctx();
    detail::Form f = parse_linear_form("2*t - x/2", c);
    REQUIRE(f.size() == 3);
    CHECK(f[0] == Rat(2));
    CHECK(f[1] == Rat(-1, 2));
    CHECK(f[2] == Rat(0));
    CHECK_THROWS_AS(parse_linear_form("t*x", c), ParseError);
}
