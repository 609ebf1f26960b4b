#pragma once

#include "mixexp/rational.hpp"

#include <initializer_list>
#include <string>
#include <vector>

namespace mixexp {

/// Dense univariate polynomial with exact rational coefficients.
///
/// coefficients()[i] multiplies x^i. Trailing zeros are always stripped, so
/// the zero polynomial has no coefficients and degree() == -1.
class RatPoly {
public:
  RatPoly() = default;
  explicit RatPoly(std::vector<Rational> coefficients);
  RatPoly(std::initializer_list<Rational> coefficients);

  static RatPoly constant(const Rational& c);
  /// The monomial c * x^power.
  static RatPoly monomial(const Rational& c, int power);

  const std::vector<Rational>& coefficients() const { return coeffs_; }
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.empty(); }
  /// Coefficient of x^i; zero beyond the degree.
  Rational coefficient(int i) const;

  Rational operator()(const Rational& x) const { return eval(x); }
  Rational eval(const Rational& x) const;
  double eval(double x) const;

  RatPoly derivative() const;

  RatPoly& operator+=(const RatPoly& other);
  RatPoly& operator-=(const RatPoly& other);
  RatPoly& operator*=(const RatPoly& other);
  RatPoly& operator*=(const Rational& scalar);

  friend RatPoly operator+(RatPoly p, const RatPoly& q) { return p += q; }
  friend RatPoly operator-(RatPoly p, const RatPoly& q) { return p -= q; }
  friend RatPoly operator*(const RatPoly& p, const RatPoly& q) {
    RatPoly r = p;
    r *= q;
    return r;
  }
  friend RatPoly operator*(RatPoly p, const Rational& s) { return p *= s; }
  friend RatPoly operator*(const Rational& s, RatPoly p) { return p *= s; }
  RatPoly operator-() const;

  friend bool operator==(const RatPoly& p, const RatPoly& q) {
    return p.coeffs_ == q.coeffs_;
  }

private:
  void normalize();

  std::vector<Rational> coeffs_;
};

RatPoly poly_add(const RatPoly& p, const RatPoly& q);
RatPoly poly_mul(const RatPoly& p, const RatPoly& q);
RatPoly poly_derivative(const RatPoly& p);
Rational poly_eval(const RatPoly& p, const Rational& x);

/// Renders ascending powers, e.g. "1/100 + 1/5*x" or "2*x - 2*x^2".
/// The zero polynomial renders as "0".
std::string to_string(const RatPoly& p, const std::string& var = "x");

} // namespace mixexp
