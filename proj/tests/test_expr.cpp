#include <catch2/catch_amalgamated.hpp>

#include <string>
#include <vector>

#include "hhbounds/expr.hpp"
#include "hhbounds/sampling.hpp"

using namespace hhbounds;

TEST_CASE("parsing and evaluation basics") {
    CHECK(Expr::parse("x1*x2")(Vector{0.5, 0.5}) == 0.25);
    CHECK(Expr::parse("x1^2 + x2^2")(Vector{1, 1}) == 2.0);
    CHECK(Expr::parse("exp(x1)")(Vector{0.0}) == 1.0);
    CHECK(Expr::parse("max(x1, 1 - x2)")(Vector{0.2, 0.1}) == 0.9);
    CHECK(Expr::parse("min(x1, x2)")(Vector{0.2, 0.1}) == 0.1);
    CHECK(Expr::parse("sqrt(x1)")(Vector{4.0}) == 2.0);
    CHECK(Expr::parse("abs(x1)")(Vector{-3.0}) == 3.0);
    CHECK(Expr::parse(" 2.5e-1 * x1 ")(Vector{2.0}) == 0.5);
    CHECK(Expr::parse("2 + 2")(Vector{0.0}) == 4.0);
}

TEST_CASE("precedence and associativity") {
    // ^ binds tighter than unary minus
    CHECK(Expr::parse("-x1^2")(Vector{2.0}) == -4.0);
    CHECK(Expr::parse("(-x1)^2")(Vector{2.0}) == 4.0);
    // ^ is right-associative
    CHECK(Expr::parse("2^3^2")(Vector{1.0}) == 512.0);
    // * binds tighter than +
    CHECK(Expr::parse("1 + 2*3")(Vector{1.0}) == 7.0);
    // left associativity of - and /
    CHECK(Expr::parse("8 - 4 - 2")(Vector{1.0}) == 2.0);
    CHECK(Expr::parse("8 / 4 / 2")(Vector{1.0}) == 1.0);
    // unary minus below * : -2*3 is (-2)*3
    CHECK(Expr::parse("-2*3")(Vector{1.0}) == -6.0);
    CHECK(Expr::parse("2*-3")(Vector{1.0}) == -6.0);
}

TEST_CASE("max_var_index") {
    CHECK(Expr::parse("x1*x3").max_var_index() == 3);
    CHECK(Expr::parse("2 + 2").max_var_index() == 0);
    CHECK(Expr::parse("max(x2, x2)").max_var_index() == 2);
    CHECK(Expr::parse("x12").max_var_index() == 12);
}

TEST_CASE("evaluation errors") {
    CHECK_THROWS_AS(Expr::parse("x1 / (x1 - x1)")(Vector{1.0}), EvalError);
    CHECK_THROWS_AS(Expr::parse("sqrt(x1)")(Vector{-1.0}), EvalError);
    CHECK_THROWS_AS(Expr::parse("x3")(Vector{1.0, 2.0}), EvalError);       // unbound variable
    CHECK_THROWS_AS(Expr::parse("(0 - 2)^0.5")(Vector{1.0}), EvalError);   // non-integer power
    CHECK_THROWS_AS(Expr::parse("(x1 - x1)^(0 - 1)")(Vector{1.0}), EvalError);
    CHECK_THROWS_AS(Expr::parse("exp(x1)")(Vector{1000.0}), EvalError);    // overflow
    CHECK(Expr::parse("(0 - 2)^2")(Vector{1.0}) == 4.0);                   // integer power is fine
}

TEST_CASE("parse errors carry spans inside the input") {
    const std::vector<std::string> bad = {
        "",      "x1 +",    "max(x1)",   "sqrt(x1, x2)", "foo(x1)", "x0",
        "x",     "1..2",    "(x1",       "x1 x2",        ")",       "1e",
        "1.e5",  "x1 @ x2", "min()",     "x1 ^",         "x999999999",
    };
    for (const std::string& src : bad) {
        CAPTURE(src);
        try {
            Expr::parse(src);
            FAIL("expected a parse error");
        } catch (const ParseError& e) {
            CHECK(e.span().start <= e.span().end);
            CHECK(e.span().end <= src.size());
            CHECK(std::string(e.what()).size() > 0);
        }
    }
    CHECK_THROWS_AS(Expr::parse("1e400"), ParseError);  // literal out of range
}

TEST_CASE("unknown function and arity messages") {
    try {
        Expr::parse("foo(x1)");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("unknown function") != std::string::npos);
    }
    try {
        Expr::parse("max(x1, x2, x3)");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("takes 2 arguments") != std::string::npos);
    }
}

TEST_CASE("print/reparse round trip on sample sources") {
    const std::vector<std::string> sources = {
        "x1*x2",
        "-x1^2",
        "2^3^2",
        "max(x1, 1 - x2)",
        "min(sqrt(x1), exp(x2 / 3))",
        "1 + 2*3 - 4/5",
        "abs(x1 - x2) + 0.125",
        "x1^-2",
        "((x1))",
        "1e-3 * x2 + 2.5E2",
    };
    for (const std::string& src : sources) {
        CAPTURE(src);
        Expr a = Expr::parse(src);
        Expr b = Expr::parse(a.to_string());
        CHECK(Expr::equal(a, b));
        CHECK(a.to_string() == b.to_string());
    }
}

namespace {

// random tree builder for the round-trip property
std::string random_source(Sampler& s, int depth) {
    if (depth <= 0 || s.below(5) == 0) {
        if (s.below(2) == 0) return "x" + std::to_string(1 + s.below(4));
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.17g", s.unit() * 10.0);
        return buf;
    }
    switch (s.below(8)) {
        case 0: return "(" + random_source(s, depth - 1) + " + " + random_source(s, depth - 1) + ")";
        case 1: return "(" + random_source(s, depth - 1) + " - " + random_source(s, depth - 1) + ")";
        case 2: return "(" + random_source(s, depth - 1) + " * " + random_source(s, depth - 1) + ")";
        case 3: return "(" + random_source(s, depth - 1) + " / " + random_source(s, depth - 1) + ")";
        case 4: return "(" + random_source(s, depth - 1) + " ^ " + random_source(s, depth - 1) + ")";
        case 5: return "(-" + random_source(s, depth - 1) + ")";
        case 6: return "max(" + random_source(s, depth - 1) + ", " + random_source(s, depth - 1) + ")";
        default: return "exp(" + random_source(s, depth - 1) + ")";
    }
}

}  // namespace

TEST_CASE("print/reparse round trip on random trees") {
    Sampler s(42);
    for (int rep = 0; rep < 300; ++rep) {
        std::string src = random_source(s, 4);
        CAPTURE(src);
        Expr a = Expr::parse(src);
        Expr b = Expr::parse(a.to_string());
        CHECK(Expr::equal(a, b));
    }
}

TEST_CASE("deeply nested input is rejected, not a crash") {
    std::string deep(5000, '(');
    deep += "x1";
    deep += std::string(5000, ')');
    CHECK_THROWS_AS(Expr::parse(deep), ParseError);
}
