#include <doctest.h>

#include <cmath>

#include "sigmageo/expr.hpp"

using namespace sigmageo;

namespace {

Eigen::VectorXd xv(std::initializer_list<double> values) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double d : values) v[i++] = d;
  return v;
}

double ev(const std::string& src, int dim, std::initializer_list<double> at) {
  return Expr::parse(src, dim).eval(xv(at));
}

}  // namespace

TEST_CASE("parsing and shape") {
  CHECK(Expr::parse("sin(x1)^2", 2).print() == "(sin(x1) ^ 2)");
  CHECK_NOTHROW(Expr::parse("1 + 0.1*(x1^2 + x2^2)", 2));
  CHECK_THROWS_AS(Expr::parse("x3", 2), VariableOutOfRangeError);
  CHECK_THROWS_AS(Expr::parse("x0", 2), VariableOutOfRangeError);
  CHECK_THROWS_AS(Expr::parse("foo(x1)", 2), UnknownFunctionError);
  CHECK_THROWS_AS(Expr::parse("1 +", 2), SyntaxError);
  CHECK_THROWS_AS(Expr::parse("(1 + 2", 2), SyntaxError);
  CHECK_THROWS_AS(Expr::parse("1 2", 2), SyntaxError);
  CHECK_THROWS_AS(Expr::parse("", 2), SyntaxError);
}

TEST_CASE("evaluation") {
  CHECK(ev("sin(x1)^2", 2, {M_PI / 2, 0}) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(ev("1 + 0.1*(x1^2+x2^2)", 2, {1, 2}) == doctest::Approx(1.5).epsilon(1e-15));
  CHECK_THROWS_AS(ev("1/x1", 1, {0}), EvalError);
  CHECK_THROWS_AS(ev("sqrt(x1)", 1, {-2}), EvalError);
  CHECK_THROWS_AS(ev("(-2)^x1", 1, {0.5}), EvalError);
  CHECK_THROWS_AS(ev("0^x1", 1, {-1}), EvalError);
}

TEST_CASE("precedence and associativity") {
  CHECK(ev("2+3*4", 1, {0}) == 14.0);
  CHECK(ev("2^3^2", 1, {0}) == 512.0);  // right-associative power
  CHECK(ev("2-3-4", 1, {0}) == -5.0);   // left-associative subtraction
  CHECK(ev("12/3/2", 1, {0}) == 2.0);
  CHECK(ev("-2^2", 1, {0}) == 4.0);     // unary minus binds inside the power
  CHECK(ev("2^-1", 1, {0}) == 0.5);
}

TEST_CASE("print-parse fixpoint") {
  const char* sources[] = {
      "sin(x1)^2",
      "1 + 0.1*(x1^2 + x2^2)",
      "-x1*cos(x2)/(1 + exp(-x1))",
      "sqrt(abs(x1 - x2)) + 2.5e-3",
      "2^3^x1",
  };
  for (const char* src : sources) {
    Expr first = Expr::parse(src, 2);
    Expr second = Expr::parse(first.print(), 2);
    CHECK(second.equals(first));
    CHECK(second.print() == first.print());
  }
}

TEST_CASE("hand-computed evaluation table") {
  struct Case {
    const char* src;
    double x1, x2;
    double expected;
  };
  const Case cases[] = {
      {"1+1", 0, 0, 2.0},
      {"2*3+4", 0, 0, 10.0},
      {"2+3*4", 0, 0, 14.0},
      {"(2+3)*4", 0, 0, 20.0},
      {"10/4", 0, 0, 2.5},
      {"2^10", 0, 0, 1024.0},
      {"-5+3", 0, 0, -2.0},
      {"x1", 3.5, 0, 3.5},
      {"x2", 0, -1.25, -1.25},
      {"x1*x2", 3, -2, -6.0},
      {"x1^2", -3, 0, 9.0},
      {"sin(0)", 0, 0, 0.0},
      {"cos(0)", 0, 0, 1.0},
      {"exp(0)", 0, 0, 1.0},
      {"exp(1)", 0, 0, 2.718281828459045},
      {"sqrt(16)", 0, 0, 4.0},
      {"abs(-7.5)", 0, 0, 7.5},
      {"sin(x1)^2 + cos(x1)^2", 0.7, 0, 1.0},
      {"1/(1+x1^2)", 2, 0, 0.2},
      {"2e2 + 1.5e-1", 0, 0, 200.15},
  };
  for (const Case& c : cases) {
    CHECK(ev(c.src, 2, {c.x1, c.x2}) == doctest::Approx(c.expected).epsilon(1e-12));
  }
}
