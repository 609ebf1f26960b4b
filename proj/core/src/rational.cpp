#include "mixexp/rational.hpp"

#include "mixexp/errors.hpp"

#include <cmath>

namespace mixexp {

Rational make_rational(std::int64_t p, std::int64_t q) {
  if (q == 0) {
    throw ParameterError("rational with zero denominator");
  }
  // Go through strings so the full 64-bit range survives on platforms
  // where long is 32 bits.
  Rational r(mpz_class(std::to_string(p)), mpz_class(std::to_string(q)));
  r.canonicalize();
  return r;
}

Rational parse_rational(std::string_view text) {
  std::string s(text);
  auto trim = [](std::string& v) {
    const auto b = v.find_first_not_of(" \t");
    const auto e = v.find_last_not_of(" \t");
    v = (b == std::string::npos) ? std::string{} : v.substr(b, e - b + 1);
  };
  trim(s);
  if (s.empty()) {
    throw ParameterError("empty rational literal");
  }
  try {
    if (const auto dot = s.find('.'); dot != std::string::npos) {
      if (s.find('/') != std::string::npos) {
        throw ParameterError("mixed decimal/fraction literal: " + s);
      }
      std::string digits = s.substr(0, dot) + s.substr(dot + 1);
      const std::size_t scale = s.size() - dot - 1;
      if (digits.empty() || digits == "-" || digits == "+") {
        throw ParameterError("bad decimal literal: " + s);
      }
      if (digits.front() == '+') {
        digits.erase(0, 1);
      }
      mpz_class den;
      mpz_ui_pow_ui(den.get_mpz_t(), 10, scale);
      Rational r(mpz_class(digits, 10), den);
      r.canonicalize();
      return r;
    }
    if (s.front() == '+') {
      s.erase(0, 1);
    }
    Rational r(s, 10);
    if (r.get_den() == 0) {
      throw ParameterError("rational with zero denominator: " + s);
    }
    r.canonicalize();
    return r;
  } catch (const std::invalid_argument&) {
    throw ParameterError("bad rational literal: " + s);
  }
}

std::string to_string(const Rational& r) { return r.get_str(); }

double to_double(const Rational& r) {
  // get_d truncates toward zero; the nearest double is either that value or
  // its neighbour away from zero.
  const double t = r.get_d();
  if (sgn(r) == 0 || !std::isfinite(t)) {
    return t;
  }
  const double away = std::nextafter(t, sgn(r) > 0 ? HUGE_VAL : -HUGE_VAL);
  if (!std::isfinite(away)) {
    return t;
  }
  const Rational dt = abs(r - Rational(t));
  const Rational da = abs(Rational(away) - r);
  if (da < dt) {
    return away;
  }
  if (dt < da) {
    return t;
  }
  int e = 0;
  const auto mantissa = static_cast<long long>(std::ldexp(std::frexp(t, &e), 53));
  return (mantissa % 2 == 0) ? t : away;
}

Rational from_double(double v) {
  if (!std::isfinite(v)) {
    throw DomainError("cannot convert non-finite double to rational");
  }
  Rational r(v);
  r.canonicalize();
  return r;
}

} // namespace mixexp
