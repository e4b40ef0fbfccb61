#include <cmath>
#include <functional>
#include <random>
#include <string>

#include "closure/cli/expression.hpp"
#include "closure/error.hpp"
#include "doctest.h"

using namespace closure;
using V = Expression::Var;

namespace {

double ev(const std::string& s, double t = 0.0, double x = 0.0) { return Expression::parse(s).eval({t, x, 0.0, 0.0}); }

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error raised");
  return ErrorKind::InvariantViolation;
}

// Random text over the full grammar, including redundant parentheses, unary
// chains and exponent literals.
std::string random_expr(std::mt19937_64& rng, int depth) {
  std::uniform_int_distribution<int> pick(0, 9);
  auto leaf = [&]() -> std::string {
    switch (rng() % 6) {
      case 0: return "t";
      case 1: return "x";
      case 2: return "pi";
      case 3: return std::to_string(rng() % 100);
      case 4: return std::to_string((rng() % 1000) / 8.0);
      default: return "1.5e-3";
    }
  };
  if (depth == 0) return leaf();
  const char* funcs[] = {"sin", "cos", "tan", "exp", "log", "sqrt", "sinh", "cosh", "tanh", "abs"};
  switch (pick(rng)) {
    case 0: return random_expr(rng, depth - 1) + " + " + random_expr(rng, depth - 1);
    case 1: return random_expr(rng, depth - 1) + "-" + random_expr(rng, depth - 1);
    case 2: return random_expr(rng, depth - 1) + " * " + random_expr(rng, depth - 1);
    case 3: return random_expr(rng, depth - 1) + "/" + random_expr(rng, depth - 1);
    case 4: return random_expr(rng, depth - 1) + "^" + random_expr(rng, depth - 1);
    case 5: return "-" + random_expr(rng, depth - 1);
    case 6: return "(" + random_expr(rng, depth - 1) + ")";
    case 7: return std::string(funcs[rng() % 10]) + "(" + random_expr(rng, depth - 1) + ")";
    case 8: return "0*" + random_expr(rng, depth - 1) + " + 1*" + random_expr(rng, depth - 1);
    default: return leaf();
  }
}

}  // namespace

TEST_CASE("precedence and associativity") {
  CHECK(ev("2+3*4") == 14.0);
  CHECK(ev("2^3^2") == 512.0);
  CHECK(ev("-2^2") == -4.0);
  CHECK(ev("2^-1") == 0.5);
  CHECK(ev("10-4-3") == 3.0);
  CHECK(ev("12/3/2") == 2.0);
  CHECK(ev("(1+2)*3") == 9.0);
  CHECK(ev("2*pi") == doctest::Approx(2.0 * 3.141592653589793).epsilon(1e-16));
  CHECK(ev("1.5e2 + .5") == 150.5);
  for (double t : {-2.0, 0.0, 0.3, 4.0}) CHECK(std::fabs(ev("cosh(t)^2 - sinh(t)^2", t) - 1.0) <= 1e-12 * std::cosh(t) * std::cosh(t));
}

TEST_CASE("syntax errors carry byte offsets and expected tokens") {
  try {
    (void)Expression::parse("2 + * 3");
    FAIL("expected syntax error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Syntax);
    const std::string m = e.what();
    CHECK(m.find("byte 4") != std::string::npos);
    CHECK(m.find("expected a number, identifier, '(' or '-'") != std::string::npos);
  }
  try {
    (void)Expression::parse("(1 + 2");
    FAIL("expected syntax error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("byte 6") != std::string::npos);
    CHECK(std::string(e.what()).find("')'") != std::string::npos);
  }
  CHECK(kind_of([] { (void)Expression::parse(""); }) == ErrorKind::Syntax);
  CHECK(kind_of([] { (void)Expression::parse("1 2"); }) == ErrorKind::Syntax);
  CHECK(kind_of([] { (void)Expression::parse("1e"); }) == ErrorKind::Syntax);
  CHECK(kind_of([] { (void)Expression::parse("sin 1"); }) == ErrorKind::Syntax);
  try {
    (void)Expression::parse("1 + foo(t)");
    FAIL("expected unknown identifier");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::UnknownIdentifier);
    CHECK(std::string(e.what()).find("'foo' at byte 4") != std::string::npos);
  }
}

TEST_CASE("evaluation domain errors") {
  CHECK(kind_of([] { (void)ev("1/(1 - t)", 1.0); }) == ErrorKind::EvaluationDomain);
  CHECK(kind_of([] { (void)ev("log(t)", 0.0); }) == ErrorKind::EvaluationDomain);
  CHECK(kind_of([] { (void)ev("sqrt(t)", -1.0); }) == ErrorKind::EvaluationDomain);
  CHECK(kind_of([] { (void)ev("(-2)^0.5"); }) == ErrorKind::EvaluationDomain);
  CHECK(kind_of([] { (void)ev("exp(1000)"); }) == ErrorKind::EvaluationDomain);
  CHECK(ev("1/(1 - t)", 0.5) == 2.0);
}

TEST_CASE("print is exact and minimal") {
  CHECK(Expression::parse("((1+2))*(3)").print() == "(1 + 2)*3");
  CHECK(Expression::parse("1-(2-3)").print() == "1 - (2 - 3)");
  CHECK(Expression::parse("(1-2)-3").print() == "1 - 2 - 3");
  CHECK(Expression::parse("(2^3)^2").print() == "(2^3)^2");
  CHECK(Expression::parse("-(2^2)").print() == "-2^2");
  CHECK(Expression::parse("(-2)^2").print() == "(-2)^2");
  CHECK(Expression::parse("0.1").print() == "0.1");
  CHECK(Expression::parse("-3").normalize().print() == "-3");
  CHECK(Expression::parse("2^(-3)").normalize() == Expression::number(0.125));
}

TEST_CASE("round trip over a random corpus") {
  std::mt19937_64 rng(1234);
  int cases = 0;
  while (cases < 500) {
    const std::string text = random_expr(rng, 1 + static_cast<int>(rng() % 5));
    Expression e;
    try {
      e = Expression::parse(text);
    } catch (const Error& err) {
      FAIL("corpus text failed to parse: " << text << " : " << err.what());
    }
    const Expression reparsed = Expression::parse(e.print());
    CHECK(reparsed == e);
    const Expression n1 = reparsed.normalize();
    const Expression n0 = e.normalize();
    CHECK(n1 == n0);
    CHECK(Expression::parse(n0.print()).normalize() == n0);
    CHECK(n0.normalize() == n0);
    ++cases;
  }
}

TEST_CASE("normalization preserves values where defined") {
  std::mt19937_64 rng(99);
  int compared = 0;
  for (int i = 0; i < 500; ++i) {
    const Expression e = Expression::parse(random_expr(rng, 3));
    double a = 0.0, b = 0.0;
    try {
      a = e.eval({0.3, 0.7, 0.0, 0.0});
      b = e.normalize().eval({0.3, 0.7, 0.0, 0.0});
    } catch (const Error&) {
      continue;
    }
    CHECK(b == doctest::Approx(a).epsilon(1e-12));
    ++compared;
  }
  CHECK(compared > 200);
}

TEST_CASE("symbolic derivatives match central differences") {
  const char* corpus[] = {"1 + t - t^2/2", "cosh(t)", "exp(2*t)*sin(x)", "sqrt(1 + t^2)", "log(2 + t)/t",
                          "t^t",           "tan(t)",  "tanh(3*t) - abs(t - 5)", "x^2*t^3", "1/(1 + t^2)^2"};
  for (const char* s : corpus) {
    const Expression e = Expression::parse(s);
    const Expression d = e.derivative(V::T);
    const Expression dd = d.derivative(V::T);
    for (double t : {0.4, 1.1, 2.3}) {
      const double h = 1e-4;
      auto f = [&](double tt) { return e.eval({tt, 0.8, 0.0, 0.0}); };
      const double fd = (f(t + h) - f(t - h)) / (2 * h);
      const double fdd = (f(t + h) - 2 * f(t) + f(t - h)) / (h * h);
      CHECK(d.eval({t, 0.8, 0, 0}) == doctest::Approx(fd).epsilon(1e-7));
      CHECK(dd.eval({t, 0.8, 0, 0}) == doctest::Approx(fdd).epsilon(1e-5));
    }
  }
  CHECK(Expression::parse("3*x + 2").derivative(V::T) == Expression::number(0.0));
  CHECK(Expression::parse("t").derivative(V::T) == Expression::number(1.0));
  CHECK(Expression::parse("x*t").depends_on(V::X));
  CHECK_FALSE(Expression::parse("pi*t").depends_on(V::X));
}
