#include <gtest/gtest.h>

#include <random>

#include "pfd/expr.hpp"
#include "pfd/polynomial.hpp"

using namespace pfd;

TEST(Polynomial, EvaluateDeriveIntegrate) {
  const Polynomial p{1.0, -2.0, 3.0};  // 1 - 2x + 3x^2
  EXPECT_DOUBLE_EQ(p(2.0), 9.0);
  EXPECT_EQ(p.derivative(), (Polynomial{-2.0, 6.0}));
  EXPECT_EQ(p.antiderivative(), (Polynomial{0.0, 1.0, -1.0, 1.0}));
  EXPECT_EQ(p.degree(), 2);
  EXPECT_TRUE(Polynomial().is_zero());
}

TEST(Polynomial, SecantIsDividedDifference) {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const Polynomial p{0.3, -1.0, 2.0, 0.5, -0.25};
  for (int i = 0; i < 50; ++i) {
    const double a = u(rng), b = u(rng);
    EXPECT_NEAR(p.secant(a, b) * (a - b), p(a) - p(b), 1e-14);
    EXPECT_NEAR(p.secant_in_first(b)(a), p.secant(a, b), 1e-14);
  }
  EXPECT_NEAR(p.secant(0.4, 0.4), p.derivative()(0.4), 1e-15);
}

TEST(Expr, ParsesArithmetic) {
  const auto e = PolyExpr::parse("0.5*x - 2*x*y^2 + (1 - x)^2 / 4", {"x", "y"});
  for (double x : {0.0, 0.3, 1.7})
    for (double y : {-1.0, 0.2}) {
      const double expected = 0.5 * x - 2 * x * y * y + (1 - x) * (1 - x) / 4;
      EXPECT_NEAR(e.eval({x, y}), expected, 1e-14);
    }
}

TEST(Expr, ScientificNotationAndUnaryMinus) {
  const auto e = PolyExpr::parse("-1e-3*a^2 + +2.5E2", {"a"});
  EXPECT_DOUBLE_EQ(e.eval({2.0}), -4e-3 + 250.0);
}

TEST(Expr, CanonicalTextRoundTrips) {
  const auto e = PolyExpr::parse("(x + 0.1)^3 - y/3", {"x", "y"});
  const auto r = PolyExpr::parse(e.to_string(), {"x", "y"});
  EXPECT_EQ(e, r);
  EXPECT_EQ(PolyExpr::parse("0", {"x"}).to_string(), "0");
}

TEST(Expr, ToPolynomial) {
  const auto e = PolyExpr::parse("(1 - a)^2", {"a"});
  EXPECT_EQ(e.to_polynomial("a"), (Polynomial{1.0, -2.0, 1.0}));
  EXPECT_THROW(PolyExpr::parse("x*y", {"x", "y"}).to_polynomial("x"), ExprError);
}

TEST(Expr, Errors) {
  EXPECT_THROW(PolyExpr::parse("z + 1", {"x"}), ExprError);
  EXPECT_THROW(PolyExpr::parse("1 / x", {"x"}), ExprError);
  EXPECT_THROW(PolyExpr::parse("x^-1", {"x"}), ExprError);
  EXPECT_THROW(PolyExpr::parse("(x + 1", {"x"}), ExprError);
  EXPECT_THROW(PolyExpr::parse("1 Pa", {"x"}), ExprError);
  EXPECT_THROW(PolyExpr::parse("", {"x"}), ExprError);
}
