#include "mixexp/structure_h.hpp"

#include "mixexp/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace mixexp {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPi = std::numbers::pi;

double lchoose(double a, double b) {
  return std::lgamma(a + 1.0) - std::lgamma(b + 1.0) - std::lgamma(a - b + 1.0);
}

double xlogy(double k, double y) { return k == 0.0 ? 0.0 : k * std::log(y); }

double log_sinh(double z) { return z + std::log1p(-std::exp(-2.0 * z)) - std::log(2.0); }
double log_cosh(double z) { return z + std::log1p(std::exp(-2.0 * z)) - std::log(2.0); }

// log of the printed inverse constant for the (1,0,1) family:
//   n = 2m:   2 sh(k pi/2) (2m-2)! / prod_{j=1}^{m-1} (k^2 + (2j)^2)
//   n = 2m+1: 2 ch(k pi/2) (2m)!   / prod_{j=1}^{m}   (k^2 + (2j-1)^2)
// An empty product is 1.
double log_printed_arctan_inverse(int n, long k) {
  const double dk = static_cast<double>(k);
  const double z = 0.5 * kPi * std::abs(dk);
  double v = std::log(2.0);
  if (n % 2 == 0) {
    const int m = n / 2;
    if (k == 0) {
      return -kInf;
    }
    v += log_sinh(z) + std::lgamma(2.0 * m - 1.0);
    for (int j = 1; j <= m - 1; ++j) {
      v -= std::log(dk * dk + 4.0 * j * j);
    }
  } else {
    const int m = (n - 1) / 2;
    v += log_cosh(z) + std::lgamma(2.0 * m + 1.0);
    for (int j = 1; j <= m; ++j) {
      const double odd = 2.0 * j - 1.0;
      v -= std::log(dk * dk + odd * odd);
    }
  }
  return v;
}

} // namespace

double QuadraticTriple::h(double t) const { return (to_double(a) * t + to_double(b)) * t + to_double(c); }

std::string QuadraticTriple::to_string() const {
  return a.get_str() + "," + b.get_str() + "," + c.get_str();
}

QuadraticTriple parse_triple(std::string_view text) {
  const std::string s(text);
  if (s == "beta") {
    return {Rational(-1), Rational(1), Rational(0)};
  }
  if (s == "betaprime") {
    return {Rational(1), Rational(1), Rational(0)};
  }
  if (s == "gamma") {
    return {Rational(0), Rational(1), Rational(0)};
  }
  if (s == "invgamma") {
    return {Rational(1), Rational(0), Rational(0)};
  }
  if (s == "gauss") {
    return {Rational(0), Rational(0), Rational(1)};
  }
  if (s == "arctan") {
    return {Rational(1), Rational(0), Rational(1)};
  }
  std::vector<std::string> parts;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    parts.push_back(item);
  }
  if (parts.size() != 3) {
    throw ParameterError("triple must be 'a,b,c' or a structure alias, got '" + s + "'");
  }
  return {parse_rational(parts[0]), parse_rational(parts[1]), parse_rational(parts[2])};
}

const std::vector<QuadraticTriple>& admissible_triples() {
  static const std::vector<QuadraticTriple> triples = {
      {Rational(-1), Rational(1), Rational(0)}, {Rational(1), Rational(1), Rational(0)},
      {Rational(0), Rational(1), Rational(0)},  {Rational(1), Rational(0), Rational(0)},
      {Rational(0), Rational(0), Rational(1)},  {Rational(1), Rational(0), Rational(1)}};
  return triples;
}

double log_arctan_integral(int n, long k) {
  if (n < 2) {
    throw ParameterError("arctan family integral needs n >= 2");
  }
  const double dk = static_cast<double>(k);
  const double z = 0.5 * kPi * std::abs(dk);
  if (n % 2 == 0) {
    const int q = n / 2 - 1;
    // (2q)! 2 sh(k pi/2) / (k prod_{j=1}^{q} (k^2 + (2j)^2)), -> pi (2q)!/prod at k = 0
    double v = std::lgamma(2.0 * q + 1.0);
    v += (k == 0) ? std::log(kPi) : std::log(2.0) + log_sinh(z) - std::log(std::abs(dk));
    for (int j = 1; j <= q; ++j) {
      v -= std::log(dk * dk + 4.0 * j * j);
    }
    return v;
  }
  const int q = (n - 3) / 2;
  // (2q+1)! 2 ch(k pi/2) / prod_{j=0}^{q} (k^2 + (2j+1)^2)
  double v = std::lgamma(2.0 * q + 2.0) + std::log(2.0) + log_cosh(z);
  for (int j = 0; j <= q; ++j) {
    const double odd = 2.0 * j + 1.0;
    v -= std::log(dk * dk + odd * odd);
  }
  return v;
}

ContinuousStructure::ContinuousStructure(HKind kind, QuadraticTriple triple)
    : kind_(kind), triple_(std::move(triple)) {}

std::string ContinuousStructure::alias() const { return to_string(kind_); }

Interval ContinuousStructure::support() const {
  switch (kind_) {
  case HKind::beta:
    return {0.0, 1.0, true, true};
  case HKind::beta_prime:
  case HKind::gamma:
  case HKind::inverse_gamma:
    return {0.0, kInf, false, false};
  case HKind::gauss:
  case HKind::arctan:
    return {-kInf, kInf, false, false};
  }
  return {};
}

int ContinuousStructure::min_n() const {
  switch (kind_) {
  case HKind::beta_prime:
  case HKind::inverse_gamma:
  case HKind::arctan:
    return 3;
  default:
    return 1;
  }
}

void ContinuousStructure::validate(int n, long k) const {
  if (n < min_n()) {
    throw ParameterError("structure " + alias() + " needs n >= " + std::to_string(min_n()) +
                         ", got n = " + std::to_string(n));
  }
  if (k < 0) {
    throw ParameterError("k must be nonnegative");
  }
  if (kind_ == HKind::beta && k > n) {
    throw ParameterError("beta structure needs k <= n");
  }
}

bool ContinuousStructure::degenerate(int /*n*/, long k) const {
  return kind_ == HKind::inverse_gamma && k == 0;
}

double ContinuousStructure::log_norm_const(int n, long k) const {
  validate(n, k);
  const double dn = n;
  const double dk = static_cast<double>(k);
  switch (kind_) {
  case HKind::beta:
    return std::log(dn + 1.0) + lchoose(dn, dk);
  case HKind::beta_prime:
    // 1 / B(k+1, n-1)
    return std::lgamma(dn + dk) - std::lgamma(dk + 1.0) - std::lgamma(dn - 1.0);
  case HKind::gamma:
    return (dk + 1.0) * std::log(dn) - std::lgamma(dk + 1.0);
  case HKind::inverse_gamma:
    if (k == 0) {
      throw ParameterError("invgamma structure at k = 0 is a point mass at 0");
    }
    return (dn - 1.0) * std::log(dk) - std::lgamma(dn - 1.0);
  case HKind::gauss:
    return 0.5 * std::log(dn / (2.0 * kPi));
  case HKind::arctan:
    return -log_arctan_integral(n, k);
  }
  return 0.0;
}

double ContinuousStructure::norm_const(int n, long k) const {
  return std::exp(log_norm_const(n, k));
}

double ContinuousStructure::log_shape(int n, long k, double t) const {
  if (!support().contains(t)) {
    return -kInf;
  }
  const double dn = n;
  const double dk = static_cast<double>(k);
  switch (kind_) {
  case HKind::beta:
    if ((t == 0.0 && k > 0) || (t == 1.0 && k < n)) {
      return -kInf;
    }
    return xlogy(dk, t) + xlogy(dn - dk, 1.0 - t);
  case HKind::beta_prime:
    return xlogy(dk, t) - (dn + dk) * std::log1p(t);
  case HKind::gamma:
    return xlogy(dk, t) - dn * t;
  case HKind::inverse_gamma:
    return -dn * std::log(t) - dk / t;
  case HKind::gauss: {
    const double r = dk - dn * t;
    return -r * r / (2.0 * dn);
  }
  case HKind::arctan:
    return dk * std::atan(t) - 0.5 * dn * std::log1p(t * t);
  }
  return -kInf;
}

double ContinuousStructure::log_density(int n, long k, double t) const {
  const double shape = log_shape(n, k, t);
  if (shape == -kInf) {
    return -kInf;
  }
  return log_norm_const(n, k) + shape;
}

double ContinuousStructure::density(int n, long k, double t) const {
  validate(n, k);
  if (degenerate(n, k)) {
    return 0.0;
  }
  return std::exp(log_density(n, k, t));
}

double ContinuousStructure::printed_density(int n, long k, double t) const {
  validate(n, k);
  if (!support().contains(t)) {
    return 0.0;
  }
  const double dn = n;
  const double dk = static_cast<double>(k);
  switch (kind_) {
  case HKind::beta_prime:
    // (n-1) C_{n+k}^k t^k (1+t)^{-n-k}
    return std::exp(std::log(dn - 1.0) + lchoose(dn + dk, dk) + xlogy(dk, t) -
                    (dn + dk) * std::log1p(t));
  case HKind::inverse_gamma:
    // k^{n-1} t^{-n} e^{-k/n} / Gamma(n-1)
    if (k == 0) {
      return 0.0;
    }
    return std::exp((dn - 1.0) * std::log(dk) - dn * std::log(t) - dk / dn -
                    std::lgamma(dn - 1.0));
  case HKind::arctan: {
    const double inv = log_printed_arctan_inverse(n, k);
    if (std::isinf(inv)) {
      return kInf;
    }
    return std::exp(dk * std::atan(t) - 0.5 * dn * std::log1p(t * t) - inv);
  }
  default:
    return density(n, k, t);
  }
}

PrintedNormalization ContinuousStructure::printed_normalization(int n, long k) const {
  validate(n, k);
  const double dn = n;
  const double dk = static_cast<double>(k);
  PrintedNormalization p;
  switch (kind_) {
  case HKind::beta:
    p.formula = "(n+1) C(n,k) t^k (1-t)^(n-k)";
    break;
  case HKind::gamma:
    p.formula = "exp(-n t) n^(k+1) t^k / k!";
    break;
  case HKind::gauss:
    p.formula = "sqrt(n/(2 pi)) exp(-(k - n t)^2 / (2n))";
    break;
  case HKind::beta_prime:
    p.formula = "(n-1) C(n+k,k) t^k (1+t)^(-n-k)";
    p.mass_as_printed = (dn + dk) / dn;
    p.consistent = (k == 0);
    p.note = "exact constant is (n-1) C(n+k-1,k); printed mass is (n+k)/n";
    break;
  case HKind::inverse_gamma:
    p.formula = "k^(n-1) t^(-n) exp(-k/n) / Gamma(n-1)";
    p.mass_as_printed = (k == 0) ? 0.0 : kInf;
    p.consistent = false;
    p.note = "exp(-k/n) does not depend on t, so the printed density is t^(-n) up to a constant "
             "and is not integrable at 0; exp(-k/t) satisfies the defining relation with "
             "h(t) = t^2 and is used instead";
    break;
  case HKind::arctan:
    p.formula = (n % 2 == 0)
                    ? "1/c = 2 sh(k pi/2) (2m-2)! / ((k^2+4)(k^2+16)...(k^2+(2m-2)^2)), n = 2m"
                    : "1/c = 2 ch(k pi/2) (2m)! / ((k^2+1)(k^2+9)...(k^2+(2m-1)^2)), n = 2m+1";
    if (n % 2 == 0) {
      p.mass_as_printed = (k == 0) ? kInf : 1.0 / dk;
      p.consistent = (k == 1);
      p.note = "exact inverse constant carries an extra factor 1/k (pi/2 limit at k = 0)";
    } else {
      p.mass_as_printed = 1.0 / (dn - 1.0);
      p.consistent = false;
      p.note = "exact inverse constant has (2m-1)! in place of (2m)!";
    }
    break;
  }
  return p;
}

double ContinuousStructure::tail_exponent(int n) const {
  switch (kind_) {
  case HKind::beta_prime:
  case HKind::inverse_gamma:
  case HKind::arctan:
    return static_cast<double>(n);
  default:
    return kInf;
  }
}

std::vector<double> ContinuousStructure::breakpoints(int n, long k) const {
  const Interval sup = support();
  const double dn = n;
  double mode = static_cast<double>(k) / dn;
  if (kind_ == HKind::arctan) {
    mode = static_cast<double>(k) / (dn - 2.0);
  }
  mode = std::clamp(mode, sup.lo, sup.hi);
  double scale = std::sqrt(std::max(0.0, triple_.h(mode)) / dn);
  if (kind_ == HKind::arctan) {
    scale = std::sqrt((1.0 + mode * mode) / (dn - 2.0));
  }
  if (!(scale > 0.0)) {
    scale = 1.0 / dn;
  }
  std::vector<double> pts;
  pts.push_back(mode);
  for (double j : {0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 64.0}) {
    pts.push_back(mode - j * scale);
    pts.push_back(mode + j * scale);
  }
  std::erase_if(pts, [&](double p) { return !sup.interior(p); });
  std::sort(pts.begin(), pts.end());
  return pts;
}

double ContinuousStructure::expectation(int n, long k, const std::function<double(double)>& f,
                                        const quad::Options& opts,
                                        std::span<const double> extra_breakpoints) const {
  validate(n, k);
  if (degenerate(n, k)) {
    return f(0.0);
  }
  const double lc = log_norm_const(n, k);
  std::vector<double> pts = breakpoints(n, k);
  pts.insert(pts.end(), extra_breakpoints.begin(), extra_breakpoints.end());
  const Interval sup = support();
  auto integrand = [&](double t) {
    const double shape = log_shape(n, k, t);
    if (shape == -kInf) {
      return 0.0;
    }
    const double d = std::exp(lc + shape);
    if (d == 0.0) {
      return 0.0;
    }
    return f(t) * d;
  };
  return quad::integrate(integrand, sup.lo, sup.hi, opts, pts).value;
}

ContinuousStructure builtin_h(const QuadraticTriple& triple) {
  const auto& all = admissible_triples();
  static const HKind kinds[] = {HKind::beta,          HKind::beta_prime, HKind::gamma,
                                HKind::inverse_gamma, HKind::gauss,      HKind::arctan};
  for (std::size_t i = 0; i < all.size(); ++i) {
    if (all[i] == triple) {
      return ContinuousStructure(kinds[i], triple);
    }
  }
  throw InadmissibleTriple("triple (" + triple.to_string() +
                           ") is not one of the six admissible quadratic characteristics");
}

ContinuousStructure builtin_h(std::string_view alias_or_triple) {
  return builtin_h(parse_triple(alias_or_triple));
}

double normalization_check(const ContinuousStructure& s, int n, long k, const quad::Options& opts) {
  s.validate(n, k);
  if (s.degenerate(n, k)) {
    return 1.0;
  }
  return s.expectation(n, k, [](double) { return 1.0; }, opts);
}

std::string to_string(HKind kind) {
  switch (kind) {
  case HKind::beta:
    return "beta";
  case HKind::beta_prime:
    return "betaprime";
  case HKind::gamma:
    return "gamma";
  case HKind::inverse_gamma:
    return "invgamma";
  case HKind::gauss:
    return "gauss";
  case HKind::arctan:
    return "arctan";
  }
  return "unknown";
}

} // namespace mixexp
