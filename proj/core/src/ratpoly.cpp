#include "mixexp/ratpoly.hpp"

#include "mixexp/errors.hpp"

#include <algorithm>
#include <sstream>

namespace mixexp {

RatPoly::RatPoly(std::vector<Rational> coefficients) : coeffs_(std::move(coefficients)) {
  for (auto& c : coeffs_) {
    c.canonicalize();
  }
  normalize();
}

RatPoly::RatPoly(std::initializer_list<Rational> coefficients)
    : RatPoly(std::vector<Rational>(coefficients)) {}

RatPoly RatPoly::constant(const Rational& c) { return RatPoly({c}); }

RatPoly RatPoly::monomial(const Rational& c, int power) {
  if (power < 0) {
    throw ParameterError("negative monomial power");
  }
  std::vector<Rational> v(static_cast<std::size_t>(power) + 1);
  v.back() = c;
  return RatPoly(std::move(v));
}

void RatPoly::normalize() {
  while (!coeffs_.empty() && sgn(coeffs_.back()) == 0) {
    coeffs_.pop_back();
  }
}

Rational RatPoly::coefficient(int i) const {
  if (i < 0 || i > degree()) {
    return Rational(0);
  }
  return coeffs_[static_cast<std::size_t>(i)];
}

Rational RatPoly::eval(const Rational& x) const {
  Rational acc(0);
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
    acc = acc * x + *it;
  }
  return acc;
}

double RatPoly::eval(double x) const {
  double acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
    acc = acc * x + to_double(*it);
  }
  return acc;
}

RatPoly RatPoly::derivative() const {
  if (coeffs_.size() <= 1) {
    return {};
  }
  std::vector<Rational> d(coeffs_.size() - 1);
  for (std::size_t i = 1; i < coeffs_.size(); ++i) {
    d[i - 1] = coeffs_[i] * static_cast<unsigned long>(i);
  }
  return RatPoly(std::move(d));
}

RatPoly& RatPoly::operator+=(const RatPoly& other) {
  if (other.coeffs_.size() > coeffs_.size()) {
    coeffs_.resize(other.coeffs_.size());
  }
  for (std::size_t i = 0; i < other.coeffs_.size(); ++i) {
    coeffs_[i] += other.coeffs_[i];
  }
  normalize();
  return *this;
}

RatPoly& RatPoly::operator-=(const RatPoly& other) {
  if (other.coeffs_.size() > coeffs_.size()) {
    coeffs_.resize(other.coeffs_.size());
  }
  for (std::size_t i = 0; i < other.coeffs_.size(); ++i) {
    coeffs_[i] -= other.coeffs_[i];
  }
  normalize();
  return *this;
}

RatPoly& RatPoly::operator*=(const RatPoly& other) {
  if (is_zero() || other.is_zero()) {
    coeffs_.clear();
    return *this;
  }
  std::vector<Rational> out(coeffs_.size() + other.coeffs_.size() - 1);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    if (sgn(coeffs_[i]) == 0) {
      continue;
    }
    for (std::size_t j = 0; j < other.coeffs_.size(); ++j) {
      out[i + j] += coeffs_[i] * other.coeffs_[j];
    }
  }
  coeffs_ = std::move(out);
  normalize();
  return *this;
}

RatPoly& RatPoly::operator*=(const Rational& scalar) {
  if (sgn(scalar) == 0) {
    coeffs_.clear();
    return *this;
  }
  for (auto& c : coeffs_) {
    c *= scalar;
  }
  return *this;
}

RatPoly RatPoly::operator-() const {
  RatPoly r = *this;
  for (auto& c : r.coeffs_) {
    c = -c;
  }
  return r;
}

RatPoly poly_add(const RatPoly& p, const RatPoly& q) { return p + q; }
RatPoly poly_mul(const RatPoly& p, const RatPoly& q) { return p * q; }
RatPoly poly_derivative(const RatPoly& p) { return p.derivative(); }
Rational poly_eval(const RatPoly& p, const Rational& x) { return p.eval(x); }

std::string to_string(const RatPoly& p, const std::string& var) {
  if (p.is_zero()) {
    return "0";
  }
  std::ostringstream out;
  bool first = true;
  const auto& c = p.coefficients();
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (sgn(c[i]) == 0) {
      continue;
    }
    Rational mag = abs(c[i]);
    const bool negative = sgn(c[i]) < 0;
    if (first) {
      if (negative) {
        out << '-';
      }
    } else {
      out << (negative ? " - " : " + ");
    }
    first = false;
    const bool unit = (mag == 1);
    if (i == 0) {
      out << mag.get_str();
      continue;
    }
    if (!unit) {
      out << mag.get_str() << '*';
    }
    out << var;
    if (i > 1) {
      out << '^' << i;
    }
  }
  return out.str();
}

} // namespace mixexp
