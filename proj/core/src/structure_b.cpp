#include "mixexp/structure_b.hpp"

#include "mixexp/errors.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <shared_mutex>
#include <sstream>

namespace mixexp {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double lchoose(double a, double b) {
  return std::lgamma(a + 1.0) - std::lgamma(b + 1.0) - std::lgamma(a - b + 1.0);
}

// k * log(x) with the convention 0 * log(0) = 0.
double xlogy(double k, double y) { return k == 0.0 ? 0.0 : k * std::log(y); }

double poly_value(const std::vector<double>& c, double y) {
  double acc = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) {
    acc = acc * y + *it;
  }
  return acc;
}

std::vector<double> poly_diff(const std::vector<double>& c) {
  std::vector<double> d;
  for (std::size_t i = 1; i < c.size(); ++i) {
    d.push_back(c[i] * static_cast<double>(i));
  }
  return d;
}

Rational factorial(long k) {
  mpz_class f;
  mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(k));
  return Rational(f);
}

Rational catalan_number(long k) {
  mpz_class c;
  mpz_bin_uiui(c.get_mpz_t(), static_cast<unsigned long>(2 * k), static_cast<unsigned long>(k));
  Rational r(c, mpz_class(k + 1));
  r.canonicalize();
  return r;
}

RatPoly poly_of(std::initializer_list<long> c) {
  std::vector<Rational> v;
  for (long x : c) {
    v.emplace_back(x);
  }
  return RatPoly(std::move(v));
}

} // namespace

bool Interval::contains(double x) const {
  if (std::isnan(x)) {
    return false;
  }
  const bool above = lo_closed ? x >= lo : x > lo;
  const bool below = hi_closed ? x <= hi : x < hi;
  return above && below;
}

bool Interval::bounded() const { return std::isfinite(lo) && std::isfinite(hi); }

std::string Interval::to_string() const {
  std::ostringstream out;
  out << (lo_closed ? '[' : '(') << lo << ", " << hi << (hi_closed ? ']' : ')');
  return out.str();
}

PowerSeriesFamily PowerSeriesFamily::from_coefficients(std::string name,
                                                       std::vector<Rational> coeffs,
                                                       double radius) {
  while (!coeffs.empty() && sgn(coeffs.back()) == 0) {
    coeffs.pop_back();
  }
  if (coeffs.empty()) {
    throw ParameterError("generating function has no nonzero coefficients");
  }
  for (const auto& a : coeffs) {
    if (sgn(a) < 0) {
      throw ParameterError("generating function coefficients must be nonnegative");
    }
  }
  if (sgn(coeffs.front()) == 0) {
    throw ParameterError("generating function needs a_0 > 0 so that omega(0) > 0");
  }
  if (!(radius > 0.0)) {
    throw ParameterError("radius of convergence must be positive");
  }
  std::vector<double> c0;
  for (const auto& a : coeffs) {
    c0.push_back(to_double(a));
  }
  auto c1 = poly_diff(c0);
  auto c2 = poly_diff(c1);

  PowerSeriesFamily f;
  f.name = std::move(name);
  f.radius = radius;
  f.coeff = [coeffs](long k) {
    return (k >= 0 && k < static_cast<long>(coeffs.size())) ? coeffs[static_cast<std::size_t>(k)]
                                                           : Rational(0);
  };
  f.omega = [c0](double y) { return poly_value(c0, y); };
  f.omega_prime = [c1](double y) { return poly_value(c1, y); };
  f.omega_second = [c2](double y) { return poly_value(c2, y); };
  if (std::isinf(radius)) {
    f.polynomial_degree = static_cast<long>(coeffs.size()) - 1;
  }
  return f;
}

// Coefficients of omega(y)^n, computed by repeated convolution and kept in
// log space. Each table is extended (recomputed) when a larger index is
// requested, so a key is written once per growth step.
struct DiscreteStructure::CoefficientCache {
  std::shared_mutex mutex;
  std::map<int, std::vector<long double>> tables;
};

DiscreteStructure::DiscreteStructure(FamilyKind kind, PowerSeriesFamily family, Interval domain,
                                     std::optional<RatPoly> covariance)
    : kind_(kind), family_(std::move(family)), domain_(domain), covariance_(std::move(covariance)),
      cache_(std::make_shared<CoefficientCache>()) {}

void DiscreteStructure::check_n(int n) const {
  if (n < 1) {
    throw ParameterError("structure B needs n >= 1, got " + std::to_string(n));
  }
}

void DiscreteStructure::check_domain(double x) const {
  if (!domain_.contains(x)) {
    std::ostringstream msg;
    msg << "x = " << x << " outside domain " << domain_.to_string() << " of family " << name();
    throw DomainError(msg.str());
  }
}

double DiscreteStructure::x_of_y(double y) const {
  if (y == 0.0) {
    return 0.0;
  }
  return y * family_.omega_prime(y) / family_.omega(y);
}

double DiscreteStructure::solve_y(double x) const {
  check_domain(x);
  if (x == 0.0) {
    return 0.0;
  }
  switch (kind_) {
  case FamilyKind::binomial:
    if (x >= 1.0) {
      throw DomainError("binomial inverse map is unbounded at x = 1");
    }
    return x / (1.0 - x);
  case FamilyKind::poisson:
    return x;
  case FamilyKind::negative_binomial:
    return x / (1.0 + x);
  case FamilyKind::catalan:
    return x * (1.0 + x) / ((1.0 + 2.0 * x) * (1.0 + 2.0 * x));
  case FamilyKind::generic:
    break;
  }

  const double y_cap = std::isfinite(family_.radius) ? family_.radius * (1.0 - 1e-12) : kInf;
  double lo = 0.0;
  double hi = std::min(1.0, y_cap);
  int grow = 0;
  while (x_of_y(hi) <= x) {
    if (hi >= y_cap) {
      throw DomainError("x = " + std::to_string(x) + " is beyond the range of x(y) on [0, R)");
    }
    lo = hi;
    hi = std::min(2.0 * hi, y_cap);
    if (++grow > 2000) {
      throw ConvergenceError("could not bracket y(x) for x = " + std::to_string(x));
    }
  }
  for (int it = 0; it < 400 && (hi - lo) > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (x_of_y(mid) < x) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  double y = 0.5 * (lo + hi);
  for (int it = 0; it < 3; ++it) {
    const double w = family_.omega(y);
    const double xy = x_of_y(y);
    const double slope = (xy + y * y * family_.omega_second(y) / w - xy * xy) / y;
    if (!(slope > 0.0)) {
      break;
    }
    const double next = y - (xy - x) / slope;
    if (next > lo && next < hi) {
      y = next;
    }
  }
  if (!(std::abs(x_of_y(y) - x) <= 1e-12 * std::max(1.0, x))) {
    throw ConvergenceError("y(x) iteration failed for x = " + std::to_string(x));
  }
  return y;
}

double DiscreteStructure::covariance_characteristic(double x) const {
  check_domain(x);
  if (covariance_) {
    return covariance_->eval(x);
  }
  const double y = solve_y(x);
  if (y == 0.0) {
    return 0.0;
  }
  // b = y dx/dy = x + y^2 omega''/omega - x^2
  return x + y * y * family_.omega_second(y) / family_.omega(y) - x * x;
}

double DiscreteStructure::fisher_information(int n, double x) const {
  check_n(n);
  const double b = covariance_characteristic(x);
  if (!(b > 0.0)) {
    throw DomainError("Fisher information undefined where b(x) = 0 (x = " + std::to_string(x) +
                      ")");
  }
  return static_cast<double>(n) / b;
}

long DiscreteStructure::support_max(int n) const {
  if (kind_ == FamilyKind::binomial) {
    return n;
  }
  if (family_.polynomial_degree) {
    return *family_.polynomial_degree * n;
  }
  return std::numeric_limits<long>::max();
}

long double DiscreteStructure::log_power_coefficient(int n, long k) const {
  {
    std::shared_lock lock(cache_->mutex);
    auto it = cache_->tables.find(n);
    if (it != cache_->tables.end() && k < static_cast<long>(it->second.size())) {
      return it->second[static_cast<std::size_t>(k)];
    }
  }
  std::unique_lock lock(cache_->mutex);
  auto& table = cache_->tables[n];
  if (k < static_cast<long>(table.size())) {
    return table[static_cast<std::size_t>(k)];
  }
  const long size = std::max<long>(k + 1, 2 * static_cast<long>(table.size()));
  std::vector<long double> base(static_cast<std::size_t>(size));
  for (long i = 0; i < size; ++i) {
    base[static_cast<std::size_t>(i)] = static_cast<long double>(to_double(family_.coeff(i)));
  }
  std::vector<long double> power(static_cast<std::size_t>(size), 0.0L);
  power[0] = 1.0L;
  for (int step = 0; step < n; ++step) {
    std::vector<long double> next(static_cast<std::size_t>(size), 0.0L);
    for (long i = 0; i < size; ++i) {
      const long double pi = power[static_cast<std::size_t>(i)];
      if (pi == 0.0L) {
        continue;
      }
      for (long j = 0; i + j < size; ++j) {
        next[static_cast<std::size_t>(i + j)] += pi * base[static_cast<std::size_t>(j)];
      }
    }
    power = std::move(next);
  }
  table.resize(static_cast<std::size_t>(size));
  for (long i = 0; i < size; ++i) {
    const long double v = power[static_cast<std::size_t>(i)];
    table[static_cast<std::size_t>(i)] =
        v > 0.0L ? std::log(v) : -std::numeric_limits<long double>::infinity();
  }
  return table[static_cast<std::size_t>(k)];
}

double DiscreteStructure::log_weight(int n, long k, double x) const {
  check_n(n);
  check_domain(x);
  const double ninf = -kInf;
  if (k < 0 || k > support_max(n)) {
    return ninf;
  }
  if (x == 0.0) {
    return k == 0 ? 0.0 : ninf;
  }
  const double dn = n;
  const double dk = static_cast<double>(k);
  switch (kind_) {
  case FamilyKind::binomial:
    if (x == 1.0) {
      return k == n ? 0.0 : ninf;
    }
    return lchoose(dn, dk) + xlogy(dk, x) + (dn - dk) * std::log1p(-x);
  case FamilyKind::poisson:
    return -dn * x + xlogy(dk, dn * x) - std::lgamma(dk + 1.0);
  case FamilyKind::negative_binomial:
    return lchoose(dn + dk - 1.0, dk) + xlogy(dk, x) - (dn + dk) * std::log1p(x);
  case FamilyKind::catalan:
    return std::log(dn) - std::log(2.0 * dk + dn) + lchoose(2.0 * dk + dn, dk) + xlogy(dk, x) +
           (dn + dk) * std::log1p(x) - (dn + 2.0 * dk) * std::log1p(2.0 * x);
  case FamilyKind::generic:
    break;
  }
  const double y = solve_y(x);
  const long double lb = log_power_coefficient(n, k);
  if (std::isinf(static_cast<double>(lb))) {
    return ninf;
  }
  return static_cast<double>(lb + static_cast<long double>(xlogy(dk, y)) -
                             static_cast<long double>(dn) * std::log(family_.omega(y)));
}

double DiscreteStructure::weight(int n, long k, double x) const {
  return std::exp(log_weight(n, k, x));
}

long DiscreteStructure::truncation_index(int n, double x, double tail, long max_k) const {
  check_n(n);
  check_domain(x);
  const long top = support_max(n);
  const double b = std::max(0.0, covariance_characteristic(x));
  const double floor_k = static_cast<double>(n) * x + 12.0 * std::sqrt(static_cast<double>(n) * b) + 20.0;
  long k_min = static_cast<long>(std::ceil(floor_k));
  if (k_min >= top) {
    return top;
  }
  double mass = 0.0;
  long k = 0;
  for (;; ++k) {
    if (k > max_k) {
      throw TruncationError("series for " + name() + " (n = " + std::to_string(n) +
                            ", x = " + std::to_string(x) + ") exceeds max_k = " +
                            std::to_string(max_k));
    }
    const double w = weight(n, k, x);
    mass += w;
    if (k >= k_min) {
      if (mass >= 1.0 - tail) {
        return k;
      }
      // Rounding in the weights can leave the running mass just short of
      // 1 - tail; past the mode the term ratio falls, so a geometric series
      // bounds what is left.
      const double w_next = weight(n, k + 1, x);
      const double ratio = w > 0.0 ? w_next / w : 0.0;
      if (ratio < 1.0 && w_next / (1.0 - ratio) <= tail) {
        return k;
      }
    }
    if (k >= top) {
      return top;
    }
  }
}

std::vector<double> DiscreteStructure::weights(int n, double x, double tail, long max_k) const {
  const long top = truncation_index(n, x, tail, max_k);
  std::vector<double> w(static_cast<std::size_t>(top) + 1);
  for (long k = 0; k <= top; ++k) {
    w[static_cast<std::size_t>(k)] = weight(n, k, x);
  }
  return w;
}

DiscreteStructure builtin_family(std::string_view name) {
  if (name == "binomial") {
    auto fam = PowerSeriesFamily::from_coefficients("binomial", {Rational(1), Rational(1)});
    return DiscreteStructure(FamilyKind::binomial, std::move(fam), Interval{0.0, 1.0, true, true},
                             poly_of({0, 1, -1}));
  }
  if (name == "poisson") {
    PowerSeriesFamily fam;
    fam.name = "poisson";
    fam.coeff = [](long k) { return Rational(1) / factorial(k); };
    fam.radius = kInf;
    fam.omega = [](double y) { return std::exp(y); };
    fam.omega_prime = [](double y) { return std::exp(y); };
    fam.omega_second = [](double y) { return std::exp(y); };
    return DiscreteStructure(FamilyKind::poisson, std::move(fam), Interval{}, poly_of({0, 1}));
  }
  if (name == "negative_binomial") {
    PowerSeriesFamily fam;
    fam.name = "negative_binomial";
    fam.coeff = [](long) { return Rational(1); };
    fam.radius = 1.0;
    fam.omega = [](double y) { return 1.0 / (1.0 - y); };
    fam.omega_prime = [](double y) { return 1.0 / ((1.0 - y) * (1.0 - y)); };
    fam.omega_second = [](double y) { return 2.0 / ((1.0 - y) * (1.0 - y) * (1.0 - y)); };
    return DiscreteStructure(FamilyKind::negative_binomial, std::move(fam), Interval{},
                             poly_of({0, 1, 1}));
  }
  if (name == "catalan") {
    // omega(y) = (1 - sqrt(1 - 4y)) / (2y), the Catalan generating function.
    PowerSeriesFamily fam;
    fam.name = "catalan";
    fam.coeff = [](long k) { return catalan_number(k); };
    fam.radius = 0.25;
    fam.omega = [](double y) {
      if (y == 0.0) {
        return 1.0;
      }
      const double s = std::sqrt(1.0 - 4.0 * y);
      return 2.0 / (1.0 + s);
    };
    fam.omega_prime = [](double y) {
      if (y == 0.0) {
        return 1.0;
      }
      const double s = std::sqrt(1.0 - 4.0 * y);
      const double w = 2.0 / (1.0 + s);
      // omega' = omega^2 / (1 - 2 y omega)
      return w * w / (1.0 - 2.0 * y * w);
    };
    fam.omega_second = [](double y) {
      if (y == 0.0) {
        return 4.0;
      }
      const double s = std::sqrt(1.0 - 4.0 * y);
      const double w = 2.0 / (1.0 + s);
      const double d = 1.0 - 2.0 * y * w;
      const double w1 = w * w / d;
      // d/dy [w^2 / d] with d' = -2 w - 2 y w'
      return (2.0 * w * w1 * d + w * w * (2.0 * w + 2.0 * y * w1)) / (d * d);
    };
    return DiscreteStructure(FamilyKind::catalan, std::move(fam), Interval{},
                             poly_of({0, 1, 3, 2}));
  }
  throw UnknownFamily("unknown discrete family '" + std::string(name) +
                      "' (expected binomial, poisson, negative_binomial or catalan)");
}

DiscreteStructure make_generic_family(PowerSeriesFamily family) {
  if (!family.coeff || !family.omega || !family.omega_prime || !family.omega_second) {
    throw ParameterError("generic family needs coefficients and omega evaluators");
  }
  Interval domain;
  if (family.polynomial_degree) {
    domain.hi = static_cast<double>(*family.polynomial_degree);
  } else if (std::isfinite(family.radius)) {
    const double y = family.radius * (1.0 - 1e-12);
    domain.hi = y * family.omega_prime(y) / family.omega(y);
  }
  return DiscreteStructure(FamilyKind::generic, std::move(family), domain, std::nullopt);
}

std::string to_string(FamilyKind kind) {
  switch (kind) {
  case FamilyKind::binomial:
    return "binomial";
  case FamilyKind::poisson:
    return "poisson";
  case FamilyKind::negative_binomial:
    return "negative_binomial";
  case FamilyKind::catalan:
    return "catalan";
  case FamilyKind::generic:
    return "generic";
  }
  return "generic";
}

} // namespace mixexp
