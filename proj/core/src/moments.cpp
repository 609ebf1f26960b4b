#include "mixexp/moments.hpp"

#include "mixexp/errors.hpp"

#include <string>

namespace mixexp {
namespace {

void check_order(int m_max) {
  if (m_max < 0 || m_max > kMaxMomentOrder) {
    throw ParameterError("moment order must lie in [0, " + std::to_string(kMaxMomentOrder) +
                         "], got " + std::to_string(m_max));
  }
}

void check_n(int n) {
  if (n < 1) {
    throw ParameterError("n must be a positive integer");
  }
}

Rational double_factorial(int k) {
  mpz_class r;
  mpz_2fac_ui(r.get_mpz_t(), static_cast<unsigned long>(k < 0 ? 0 : k));
  return Rational(r);
}

const RatPoly kX = RatPoly({Rational(0), Rational(1)});

} // namespace

MomentTableB beta_moments(const RatPoly& b_poly, int n, int m_max) {
  check_n(n);
  check_order(m_max);
  MomentTableB t;
  t.n = n;
  t.covariance = b_poly;
  t.entries.push_back(RatPoly::constant(Rational(1)));
  if (m_max >= 1) {
    t.entries.emplace_back();
  }
  for (int m = 1; m < m_max; ++m) {
    const auto& cur = t.entries[static_cast<std::size_t>(m)];
    const auto& prev = t.entries[static_cast<std::size_t>(m - 1)];
    RatPoly inner = cur.derivative() + prev * Rational(n * m);
    t.entries.push_back(b_poly * inner);
  }
  return t;
}

Rational asymptotic_coefficient(int m) {
  if (m < 2) {
    throw ParameterError("asymptotic coefficient needs m >= 2");
  }
  const int r = m / 2;
  if (m % 2 == 0) {
    return double_factorial(2 * r - 1);
  }
  Rational sum(0);
  for (int i = 0; i < r; ++i) {
    sum += double_factorial(2 * i + 1) / double_factorial(2 * i);
  }
  Rational c = double_factorial(2 * r) * sum / 2;
  c.canonicalize();
  return c;
}

Rational h_alpha1(const QuadraticTriple& triple, int n, long k) {
  const Rational den = Rational(n) - 2 * triple.a;
  if (sgn(den) <= 0) {
    throw ParameterError("mean of h_{n,k} needs n > 2a");
  }
  Rational r = (Rational(k) + triple.b) / den;
  r.canonicalize();
  return r;
}

MomentTableH nu_moments(const QuadraticTriple& triple, int n, long k, int m_max) {
  check_n(n);
  check_order(m_max);
  const auto& [a, b, c] = triple;
  MomentTableH t;
  t.triple = triple;
  t.n = n;
  t.k = k;
  t.alpha1 = h_alpha1(triple, n, k);
  const Rational& al = t.alpha1;
  const Rational h_at = a * al * al + b * al + c;       // h(alpha_1)
  const Rational dh_at = 2 * a * al + b;                // h'(alpha_1)
  const Rational drift = Rational(n) * al - Rational(k); // n alpha_1 - k
  t.entries.push_back(Rational(1));
  if (m_max >= 1) {
    t.entries.push_back(Rational(0));
  }
  for (int m = 2; m <= m_max; ++m) {
    const Rational den = Rational(n) - a * (m + 1);
    if (sgn(den) <= 0) {
      throw ParameterError("nu_" + std::to_string(m) + " needs n > a(m+1)");
    }
    Rational v = ((m * dh_at - drift) * t.entries[static_cast<std::size_t>(m - 1)] +
                  (m - 1) * h_at * t.entries[static_cast<std::size_t>(m - 2)]) /
                 den;
    v.canonicalize();
    t.entries.push_back(v);
  }
  return t;
}

Rational nu2_closed_form(const QuadraticTriple& triple, int n, long k) {
  const auto& [a, b, c] = triple;
  const Rational n2a = Rational(n) - 2 * a;
  const Rational n3a = Rational(n) - 3 * a;
  if (sgn(n2a) <= 0 || sgn(n3a) <= 0) {
    throw ParameterError("nu_2 closed form needs n > 3a and n > 2a");
  }
  const Rational kk(k);
  Rational v = (kk + b) * (a * kk + b * n - a * b) / (n2a * n2a * n3a) + c / n3a;
  v.canonicalize();
  return v;
}

RatPoly phillips_alpha(const Rational& b_coeff, const Rational& a_coeff, int n) {
  const Rational den = Rational(n) - 2 * a_coeff;
  if (sgn(den) <= 0) {
    throw ParameterError("alpha(x) needs n > 2a");
  }
  Rational c0 = b_coeff / den;
  Rational c1 = Rational(n) / den;
  c0.canonicalize();
  c1.canonicalize();
  return RatPoly({c0, c1});
}

// The recurrence follows from integrating h(t) (t - alpha)^m h_{n,k}'(t) by
// parts and expanding the quadratic h about alpha:
//   h(t) = h(alpha) + h'(alpha)(t - alpha) + a (t - alpha)^2,
// after which the boundary terms vanish and only mu_{m-1}, mu_m, mu_{m+1}
// survive:
//   (n - a(m+2)) mu_{m+1} = b(x) mu_m'
//       + mu_m ((m+1) h'(alpha) - n (alpha - x))
//       + mu_{m-1} (m h(alpha) + m b(x) alpha').
MomentTablePhillips mu_moments(const RatPoly& b_poly, const QuadraticTriple& triple, int n,
                               int m_max) {
  check_n(n);
  check_order(m_max);
  const auto& [a, b, c] = triple;
  MomentTablePhillips t;
  t.n = n;
  t.triple = triple;
  t.covariance = b_poly;
  t.alpha = phillips_alpha(b, a, n);
  const RatPoly& alpha = t.alpha;
  const RatPoly dalpha = alpha.derivative();
  const RatPoly h_alpha = a * alpha * alpha + b * alpha + RatPoly::constant(c);
  const RatPoly dh_alpha = Rational(2 * a) * alpha + RatPoly::constant(b);
  const RatPoly shift = Rational(n) * (alpha - kX); // n (alpha(x) - x)

  t.entries.push_back(RatPoly::constant(Rational(1)));
  if (m_max >= 1) {
    t.entries.emplace_back();
  }
  for (int m = 1; m < m_max; ++m) {
    const Rational den = Rational(n) - a * (m + 2);
    if (sgn(den) <= 0) {
      throw ParameterError("mu_" + std::to_string(m + 1) + " needs n > a(m+2)");
    }
    const auto& cur = t.entries[static_cast<std::size_t>(m)];
    const auto& prev = t.entries[static_cast<std::size_t>(m - 1)];
    RatPoly next = b_poly * cur.derivative();
    next += cur * (Rational(m + 1) * dh_alpha - shift);
    next += prev * (Rational(m) * h_alpha + Rational(m) * b_poly * dalpha);
    Rational inv = 1 / den;
    inv.canonicalize();
    t.entries.push_back(next * inv);
  }
  return t;
}

RatPoly mu2_closed_form(const RatPoly& b_poly, const QuadraticTriple& triple, int n) {
  const auto& [a, b, c] = triple;
  const Rational n2a = Rational(n) - 2 * a;
  const Rational n3a = Rational(n) - 3 * a;
  if (sgn(n2a) <= 0 || sgn(n3a) <= 0) {
    throw ParameterError("mu_2 closed form needs n > 3a and n > 2a");
  }
  const RatPoly alpha = phillips_alpha(b, a, n);
  Rational slope = Rational(n) / n2a;
  slope.canonicalize();
  RatPoly inner = a * alpha * alpha + b * alpha + RatPoly::constant(c) + b_poly * slope;
  Rational inv = 1 / n3a;
  inv.canonicalize();
  return inner * inv;
}

RatPoly mu2_gamma_kernel_printed(const RatPoly& b_poly, int n) {
  check_n(n);
  Rational inv_n(1, n);
  inv_n.canonicalize();
  return (kX + b_poly) * inv_n + RatPoly::constant(inv_n * inv_n);
}

RatPoly mu2_beta_prime_kernel_printed(const RatPoly& b_poly, int n) {
  if (n <= 3) {
    throw ParameterError("beta-prime kernel second moment needs n > 3");
  }
  Rational inv_n2(1, n - 2);
  inv_n2.canonicalize();
  const RatPoly u = RatPoly({inv_n2, Rational(n) * inv_n2}); // (n x + 1)/(n - 2)
  RatPoly inner = u * u + u + b_poly * (Rational(n) * inv_n2);
  Rational inv_n3(1, n - 3);
  inv_n3.canonicalize();
  return inner * inv_n3;
}

namespace {
template <typename Entries>
void check_index(const Entries& e, int m) {
  if (m < 0 || m >= static_cast<int>(e.size())) {
    throw IndexError("moment order " + std::to_string(m) + " not in table of size " +
                     std::to_string(e.size()));
  }
}
} // namespace

Rational moment_numeric(const MomentTableB& table, const Rational& x, int m) {
  check_index(table.entries, m);
  return table.entries[static_cast<std::size_t>(m)].eval(x);
}

Rational moment_numeric(const MomentTableH& table, int m) {
  check_index(table.entries, m);
  return table.entries[static_cast<std::size_t>(m)];
}

Rational moment_numeric(const MomentTablePhillips& table, const Rational& x, int m) {
  check_index(table.entries, m);
  return table.entries[static_cast<std::size_t>(m)].eval(x);
}

} // namespace mixexp
