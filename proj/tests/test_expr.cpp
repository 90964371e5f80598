#include <cmath>

#include "doctest.h"
#include "sdot/expr.hpp"

using namespace sdot;

TEST_CASE("expression evaluation matches hand-computed values") {
    // Values frozen from independent evaluation (python -c 'print(...)').
    Expr e = Expr::parse("0.5*((x1-y1)^2 + (x2-y2)^2)");
    CHECK(e.eval_pair(vec2(0.3, 0.7), vec2(1.0, -0.2)) ==
          doctest::Approx(0.65).epsilon(1e-15));
    CHECK(e.uses_target());

    Expr g = Expr::parse("exp(-x1) + log(x2) - sqrt(x1 + x2)");
    CHECK(g.eval_point(vec2(0.4, 2.5)) ==
          doctest::Approx(-0.11632785868284556).epsilon(1e-13));
    CHECK_FALSE(g.uses_target());
}

TEST_CASE("power is right-associative and unary minus binds correctly") {
    Expr e = Expr::parse("2^3^2");  // 2^(3^2) = 512
    CHECK(e.eval_point(vec2(0, 0)) == doctest::Approx(512.0));
    Expr f = Expr::parse("-x1^2");  // -(x1^2)
    CHECK(f.eval_point(vec2(3, 0)) == doctest::Approx(-9.0));
    Expr h = Expr::parse("(-x1)^2");
    CHECK(h.eval_point(vec2(3, 0)) == doctest::Approx(9.0));
}

TEST_CASE("division and precedence") {
    Expr e = Expr::parse("1 + 2*3 - 4/8");
    CHECK(e.eval_point(vec2(0, 0)) == doctest::Approx(6.5));
}

TEST_CASE("third coordinates are addressable") {
    Expr e = Expr::parse("x3*y3");
    CHECK(e.eval_pair(vec3(0, 0, 2.0), vec3(0, 0, -3.0)) == doctest::Approx(-6.0));
}

TEST_CASE("malformed expressions are rejected with positions") {
    CHECK_THROWS_AS(Expr::parse("x1 +"), ExprError);
    CHECK_THROWS_AS(Expr::parse("(x1"), ExprError);
    CHECK_THROWS_AS(Expr::parse("x7"), ExprError);
    CHECK_THROWS_AS(Expr::parse("foo(x1)"), ExprError);
    CHECK_THROWS_AS(Expr::parse(""), ExprError);
    CHECK_THROWS_AS(Expr::parse("1..2"), ExprError);
}
