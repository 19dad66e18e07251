#include <doctest.h>

#include <cmath>
#include <numbers>

#include "minkcurv/expression.hpp"
#include "minkcurv/types.hpp"

using namespace minkcurv;

TEST_CASE("expression values") {
  CHECK(Expression::parse("1 + 2*3").eval(0, 0) == 7);
  CHECK(Expression::parse("(1 + 2)*3").eval(0, 0) == 9);
  CHECK(Expression::parse("2^3^2").eval(0, 0) == 512);
  CHECK(Expression::parse("-x^2").eval(3, 0) == -9);
  CHECK(Expression::parse("x - y - 1").eval(5, 2) == 2);
  CHECK(Expression::parse("8 / 4 / 2").eval(0, 0) == 1);
  CHECK(Expression::parse("cos(pi)").eval(0, 0) == doctest::Approx(-1));
  CHECK(Expression::parse("sqrt(x*x + y*y)").eval(3, 4) == doctest::Approx(5));
  CHECK(Expression::parse("exp(0.5*x)").eval(2, 0) == doctest::Approx(std::exp(1.0)));
  CHECK(Expression::parse(" 1.5e1 ").eval(0, 0) == 15);
}

TEST_CASE("expression derivatives match finite differences") {
  const char* exprs[] = {"x^2 - y^2", "sin(x)*cos(2*y) + exp(x*y)/3", "sqrt(2 + x^2 + y^4)",
                         "x^y + 1", "(x + 2)^2.5 / (1 + y*y)"};
  const double x = 0.7, y = 0.4, h = 1e-4;
  for (const char* text : exprs) {
    CAPTURE(text);
    const Expression e = Expression::parse(text);
    const Jet2 j = e.eval_jet(x, y);
    auto f = [&](double a, double b) { return e.eval(a, b); };
    CHECK(j.dx == doctest::Approx((f(x + h, y) - f(x - h, y)) / (2 * h)).epsilon(1e-7));
    CHECK(j.dy == doctest::Approx((f(x, y + h) - f(x, y - h)) / (2 * h)).epsilon(1e-7));
    CHECK(j.dxx == doctest::Approx((f(x + h, y) - 2 * f(x, y) + f(x - h, y)) / (h * h)).epsilon(1e-5));
    CHECK(j.dyy == doctest::Approx((f(x, y + h) - 2 * f(x, y) + f(x, y - h)) / (h * h)).epsilon(1e-5));
    const double dxy = (f(x + h, y + h) - f(x + h, y - h) - f(x - h, y + h) + f(x - h, y - h)) / (4 * h * h);
    CHECK(j.dxy == doctest::Approx(dxy).epsilon(1e-5));
  }
}

TEST_CASE("malformed expressions are rejected") {
  for (const char* bad : {"", "1 +", "(x", "x y", "foo(x)", "sin x", "2 $ 3", "x)"}) {
    CAPTURE(bad);
    try {
      Expression::parse(bad);
      FAIL("accepted");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::InvalidInput);
    }
  }
}
