#include "mixexp/errors.hpp"
#include "mixexp/ratpoly.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace mixexp;

namespace {

RatPoly P(std::initializer_list<int> ascending) {
  std::vector<Rational> c;
  for (int v : ascending) {
    c.emplace_back(v);
  }
  return RatPoly(std::move(c));
}

RatPoly random_poly(std::mt19937& rng, int max_degree) {
  std::uniform_int_distribution<int> deg(-1, max_degree);
  std::uniform_int_distribution<int> num(-9, 9);
  std::uniform_int_distribution<int> den(1, 7);
  std::vector<Rational> c;
  const int d = deg(rng);
  for (int i = 0; i <= d; ++i) {
    c.push_back(make_rational(num(rng), den(rng)));
  }
  return RatPoly(std::move(c));
}

} // namespace

TEST(Rational, ParsesFractionsAndDecimals) {
  EXPECT_EQ(parse_rational("3/6"), Rational(1, 2));
  EXPECT_EQ(parse_rational("-0.125"), Rational(-1, 8));
  EXPECT_EQ(parse_rational("7"), Rational(7));
  EXPECT_THROW(parse_rational("1/0"), ParameterError);
  EXPECT_THROW(parse_rational("abc"), ParameterError);
  EXPECT_THROW(make_rational(1, 0), ParameterError);
  EXPECT_EQ(to_string(make_rational(2, -4)), "-1/2");
  EXPECT_EQ(from_double(0.375), Rational(3, 8));
}

TEST(RatPoly, Add) {
  EXPECT_EQ(poly_add(P({1, 1}), P({0, -1})), P({1}));
  EXPECT_EQ(poly_add(RatPoly(), P({3, 0, 2})), P({3, 0, 2}));
  EXPECT_EQ(poly_add(P({0, 1}), P({0, 1})), P({0, 2}));
}

TEST(RatPoly, Mul) {
  EXPECT_EQ(poly_mul(P({0, 1}), P({1, -1})), P({0, 1, -1}));
  EXPECT_TRUE(poly_mul(P({1, 2, 3}), RatPoly()).is_zero());
  EXPECT_EQ(poly_mul(P({1, 1}), P({1, 2})), P({1, 3, 2}));
}

TEST(RatPoly, Derivative) {
  EXPECT_EQ(poly_derivative(P({0, 1, -1})), P({1, -2}));
  EXPECT_TRUE(poly_derivative(P({5})).is_zero());
  EXPECT_EQ(poly_derivative(P({0, 1, 3, 2})), P({1, 6, 6}));
}

TEST(RatPoly, Eval) {
  EXPECT_EQ(poly_eval(P({0, 1, -1}), Rational(1, 2)), Rational(1, 4));
  EXPECT_EQ(poly_eval(RatPoly(), Rational(17, 3)), 0);
  EXPECT_EQ(poly_eval(P({1, 3, 2}), Rational(1)), 6);
  EXPECT_DOUBLE_EQ(P({1, 3, 2}).eval(0.5), 3.0);
}

TEST(RatPoly, ZeroAndDegree) {
  EXPECT_EQ(RatPoly().degree(), -1);
  EXPECT_EQ(P({0, 0, 0}).degree(), -1);
  EXPECT_EQ(P({1, 0, 0}).degree(), 0);
  EXPECT_EQ((P({0, 1}) - P({0, 1})).degree(), -1);
  EXPECT_EQ(RatPoly::monomial(Rational(3), 4).coefficient(4), 3);
  EXPECT_EQ(RatPoly::monomial(Rational(3), 4).coefficient(9), 0);
}

TEST(RatPoly, RendersAscending) {
  EXPECT_EQ(to_string(RatPoly()), "0");
  EXPECT_EQ(to_string(P({0, 2, -2})), "2*x - 2*x^2");
  EXPECT_EQ(to_string(RatPoly({Rational(1, 100), Rational(1, 5)})), "1/100 + 1/5*x");
  EXPECT_EQ(to_string(P({-1, -1, 1})), "-1 - x + x^2");
  EXPECT_EQ(to_string(P({0, 1}), "t"), "t");
}

TEST(RatPoly, RingAxiomsOnRandomPolynomials) {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const auto p = random_poly(rng, 6);
    const auto q = random_poly(rng, 6);
    const auto r = random_poly(rng, 6);
    EXPECT_EQ((p + q) + r, p + (q + r));
    EXPECT_EQ(p * (q + r), p * q + p * r);
    EXPECT_EQ(p * q, q * p);
    EXPECT_EQ((p * q).derivative(), p.derivative() * q + p * q.derivative());
  }
}

TEST(RatPoly, EvalIsAHomomorphism) {
  std::mt19937 rng(5);
  std::uniform_int_distribution<int> num(-20, 20);
  std::uniform_int_distribution<int> den(1, 13);
  for (int trial = 0; trial < 20; ++trial) {
    const auto p = random_poly(rng, 5);
    const auto q = random_poly(rng, 5);
    const Rational x = make_rational(num(rng), den(rng));
    EXPECT_EQ((p + q)(x), p(x) + q(x));
    EXPECT_EQ((p * q)(x), p(x) * q(x));
    EXPECT_EQ((-p)(x), -p(x));
    EXPECT_EQ((p * Rational(3, 7))(x), p(x) * Rational(3, 7));
  }
}
