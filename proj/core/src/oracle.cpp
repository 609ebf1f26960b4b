#include "mixexp/oracle.hpp"

#include "mixexp/errors.hpp"

#include <boost/math/distributions/chi_squared.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace mixexp::oracle {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

Rational binomial_coefficient(int n, int k) {
  mpz_class c;
  mpz_bin_uiui(c.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return Rational(c);
}

Rational rational_pow(const Rational& base, int e) {
  Rational r(1);
  for (int i = 0; i < e; ++i) {
    r *= base;
  }
  return r;
}

long double ipow(long double v, int m) {
  long double r = 1.0L;
  for (int i = 0; i < m; ++i) {
    r *= v;
  }
  return r;
}

} // namespace

BruteMoment brute_beta(const DiscreteStructure& s, int n, int m, const Rational& x,
                       double tail_target) {
  if (m < 0) {
    throw ParameterError("moment order must be nonnegative");
  }
  const double xd = to_double(x);
  if (!s.domain().contains(xd)) {
    throw DomainError("x outside the structure's domain");
  }
  BruteMoment out;
  if (sgn(x) == 0) {
    out.value = (m == 0) ? Rational(1) : Rational(0);
    out.exact = true;
    out.terms = 1;
    return out;
  }
  const Rational nx = Rational(n) * x;
  if (s.kind() == FamilyKind::binomial) {
    Rational sum(0);
    const Rational one_minus = 1 - x;
    for (int k = 0; k <= n; ++k) {
      sum += binomial_coefficient(n, k) * rational_pow(x, k) * rational_pow(one_minus, n - k) *
             rational_pow(Rational(k) - nx, m);
    }
    sum.canonicalize();
    out.value = sum;
    out.exact = true;
    out.terms = n + 1;
    return out;
  }

  // Extended-precision weights by term ratio where a closed recurrence exists.
  const long double xl = static_cast<long double>(xd);
  const long double dn = n;
  const long double lambda = dn * xl;
  long double w = 0.0L;
  switch (s.kind()) {
  case FamilyKind::poisson:
    w = std::exp(-lambda);
    break;
  case FamilyKind::negative_binomial:
    w = std::pow(1.0L + xl, -dn);
    break;
  case FamilyKind::catalan:
    w = std::pow((1.0L + xl) / (1.0L + 2.0L * xl), dn);
    break;
  default:
    w = static_cast<long double>(s.weight(n, 0, xd));
    break;
  }
  auto next_weight = [&](long k, long double wk) -> long double {
    const long double dk = static_cast<long double>(k);
    switch (s.kind()) {
    case FamilyKind::poisson:
      return wk * lambda / (dk + 1.0L);
    case FamilyKind::negative_binomial:
      return wk * (dn + dk) / (dk + 1.0L) * xl / (1.0L + xl);
    case FamilyKind::catalan: {
      const long double y = xl * (1.0L + xl) / ((1.0L + 2.0L * xl) * (1.0L + 2.0L * xl));
      return wk * (2.0L * dk + dn + 1.0L) * (2.0L * dk + dn) / ((dk + 1.0L) * (dk + dn + 1.0L)) * y;
    }
    default:
      return static_cast<long double>(s.weight(n, k + 1, xd));
    }
  };

  const long double center = static_cast<long double>(to_double(nx));
  long double sum = 0.0L;
  const long top = s.support_max(n);
  long k = 0;
  for (;; ++k) {
    const long double term = w * ipow(static_cast<long double>(k) - center, m);
    sum += term;
    if (k >= top) {
      out.tail_bound = 0.0;
      break;
    }
    const long double w_next = next_weight(k, w);
    // Past the mode the term ratio decreases monotonically, so the tail is
    // dominated by a geometric series started at the next term.
    if (static_cast<long double>(k) > center + 2.0L && w > 0.0L) {
      const long double t_next =
          std::abs(w_next * ipow(static_cast<long double>(k + 1) - center, m));
      const long double t_next2 = std::abs(next_weight(k + 1, w_next) *
                                           ipow(static_cast<long double>(k + 2) - center, m));
      const long double ratio = t_next > 0.0L ? t_next2 / t_next : 0.0L;
      if (ratio < 1.0L) {
        const long double bound = t_next / (1.0L - ratio);
        if (bound < static_cast<long double>(tail_target)) {
          out.tail_bound = static_cast<double>(bound);
          break;
        }
      }
    }
    if (k > 10'000'000) {
      throw TruncationError("brute-force moment sum did not reach its tail target");
    }
    w = w_next;
  }
  out.value = from_double(static_cast<double>(sum));
  out.exact = false;
  out.terms = k + 1;
  return out;
}

std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed & 0xffffffffu),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream & 0xffffffffu),
                    static_cast<std::uint32_t>(stream >> 32)};
  return std::mt19937_64(seq);
}

double sample_continuous(const ContinuousStructure& s, int n, long k, std::mt19937_64& rng) {
  const double dn = n;
  const double dk = static_cast<double>(k);
  switch (s.kind()) {
  case HKind::beta: {
    std::gamma_distribution<double> g1(dk + 1.0, 1.0);
    std::gamma_distribution<double> g2(dn - dk + 1.0, 1.0);
    const double a = g1(rng);
    const double b = g2(rng);
    return a / (a + b);
  }
  case HKind::beta_prime: {
    std::gamma_distribution<double> g1(dk + 1.0, 1.0);
    std::gamma_distribution<double> g2(dn - 1.0, 1.0);
    const double a = g1(rng);
    return a / g2(rng);
  }
  case HKind::gamma: {
    std::gamma_distribution<double> g(dk + 1.0, 1.0 / dn);
    return g(rng);
  }
  case HKind::inverse_gamma: {
    if (k == 0) {
      return 0.0;
    }
    std::gamma_distribution<double> g(dn - 1.0, 1.0);
    return dk / g(rng);
  }
  case HKind::gauss: {
    std::normal_distribution<double> z(dk / dn, 1.0 / std::sqrt(dn));
    return z(rng);
  }
  case HKind::arctan: {
    // In s = atan(t) the density is proportional to exp(k s) cos(s)^{n-2} on
    // (-pi/2, pi/2); a uniform proposal there is a Cauchy (Student-1)
    // proposal in t.
    constexpr double kHalfPi = 0.5 * std::numbers::pi;
    const double p = dn - 2.0;
    const double mode = std::atan(dk / p);
    const double log_max = dk * mode + p * std::log(std::cos(mode));
    const double efficiency =
        std::exp(log_arctan_integral(n, k) - std::log(std::numbers::pi) - log_max);
    if (efficiency < 1e-3) {
      throw SamplerError("arctan rejection sampler efficiency " + std::to_string(efficiency) +
                         " is below 1e-3");
    }
    std::uniform_real_distribution<double> angle(-kHalfPi, kHalfPi);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (;;) {
      const double th = angle(rng);
      const double c = std::cos(th);
      if (c <= 0.0) {
        continue;
      }
      const double log_g = dk * th + p * std::log(c) - log_max;
      if (std::log(unit(rng)) < log_g) {
        return std::tan(th);
      }
    }
  }
  }
  throw SamplerError("no sampler for structure");
}

std::vector<double> sample_continuous(const ContinuousStructure& s, int n, long k,
                                      std::size_t n_samples, std::uint64_t seed) {
  s.validate(n, k);
  auto rng = make_engine(seed);
  std::vector<double> out(n_samples);
  for (auto& v : out) {
    v = sample_continuous(s, n, k, rng);
  }
  return out;
}

namespace {

struct DiscreteTable {
  std::vector<double> cumulative;
};

DiscreteTable discrete_table(const DiscreteStructure& s, int n, double x) {
  const auto w = s.weights(n, x, 1e-14, 10'000'000);
  DiscreteTable t;
  t.cumulative.resize(w.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    acc += w[i];
    t.cumulative[i] = acc;
  }
  return t;
}

long draw_k(const DiscreteTable& t, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, t.cumulative.back());
  const double v = u(rng);
  auto it = std::upper_bound(t.cumulative.begin(), t.cumulative.end(), v);
  if (it == t.cumulative.end()) {
    --it;
  }
  return static_cast<long>(it - t.cumulative.begin());
}

} // namespace

std::vector<long> sample_discrete(const DiscreteStructure& s, int n, double x,
                                  std::size_t n_samples, std::uint64_t seed) {
  const auto table = discrete_table(s, n, x);
  auto rng = make_engine(seed);
  std::vector<long> out(n_samples);
  for (auto& k : out) {
    k = draw_k(table, rng);
  }
  return out;
}

SampleBatch sample_phillips(const OperatorPreset& preset, int n, double x, std::size_t n_samples,
                            std::uint64_t seed, std::uint64_t stream) {
  if (n < preset.min_n) {
    throw ParameterError("preset " + preset.name + " needs n >= " +
                         std::to_string(preset.min_n));
  }
  SampleBatch batch;
  batch.seed = seed;
  batch.n_samples = n_samples;
  if (n_samples == 0) {
    return batch;
  }
  const auto table = discrete_table(preset.discrete, n, x);
  auto rng = make_engine(seed, stream);
  batch.values.resize(n_samples);
  for (auto& v : batch.values) {
    const long k = draw_k(table, rng);
    v = sample_continuous(preset.continuous, n, k, rng);
  }
  return batch;
}

McEstimate estimate(const std::vector<double>& values) {
  McEstimate e;
  const std::size_t count = values.size();
  if (count < 2) {
    if (count == 1) {
      e.mean = values.front();
    }
    return e;
  }
  long double sum = 0.0L;
  for (double v : values) {
    sum += v;
  }
  const long double mean = sum / static_cast<long double>(count);
  long double m2 = 0.0L;
  long double m4 = 0.0L;
  for (double v : values) {
    const long double d = v - mean;
    const long double d2 = d * d;
    m2 += d2;
    m4 += d2 * d2;
  }
  const long double nn = static_cast<long double>(count);
  e.mean = static_cast<double>(mean);
  e.variance = static_cast<double>(m2 / (nn - 1.0L));
  e.std_error = std::sqrt(e.variance / static_cast<double>(count));
  const long double fourth = m4 / nn;
  const long double var_b = m2 / nn;
  e.variance_std_error =
      static_cast<double>(std::sqrt(std::max(0.0L, fourth - var_b * var_b) / nn));
  return e;
}

double quad_expectation(const ContinuousStructure& s, int n, long k,
                        const std::function<double(double)>& f) {
  return s.expectation(n, k, f, quad::Options{1e-11, 0.0});
}

ChiSquare chi_square_pmf(const DiscreteStructure& s, int n, double x,
                         const std::vector<long>& draws) {
  const auto w = s.weights(n, x, 1e-14, 10'000'000);
  const double total = static_cast<double>(draws.size());
  std::vector<double> observed(w.size() + 1, 0.0);
  for (long k : draws) {
    const auto idx = static_cast<std::size_t>(std::min<long>(k, static_cast<long>(w.size())));
    observed[idx] += 1.0;
  }
  std::vector<double> expected(w.size() + 1, 0.0);
  double mass = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    expected[i] = total * w[i];
    mass += w[i];
  }
  expected.back() = total * std::max(0.0, 1.0 - mass);

  std::vector<std::pair<double, double>> cells;
  double obs_acc = 0.0;
  double exp_acc = 0.0;
  for (std::size_t i = 0; i < expected.size(); ++i) {
    obs_acc += observed[i];
    exp_acc += expected[i];
    if (exp_acc >= 5.0) {
      cells.emplace_back(obs_acc, exp_acc);
      obs_acc = 0.0;
      exp_acc = 0.0;
    }
  }
  if (!cells.empty()) {
    cells.back().first += obs_acc;
    cells.back().second += exp_acc;
  }
  ChiSquare r;
  for (const auto& [o, e] : cells) {
    r.statistic += (o - e) * (o - e) / e;
  }
  r.dof = std::max(1, static_cast<int>(cells.size()) - 1);
  r.critical_999 = boost::math::quantile(boost::math::chi_squared(r.dof), 0.999);
  return r;
}

double ks_statistic(const ContinuousStructure& s, int n, long k, std::vector<double> samples) {
  if (samples.empty()) {
    return 0.0;
  }
  std::sort(samples.begin(), samples.end());
  const Interval sup = s.support();
  const double lc = s.log_norm_const(n, k);
  auto pdf = [&](double t) { return std::exp(lc + std::log(s.density(n, k, t)) - lc); };
  const quad::Options opts{1e-12, 0.0};
  const auto pts = s.breakpoints(n, k);
  double cdf = quad::integrate(pdf, sup.lo, samples.front(), opts, pts).value;
  const double count = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (i > 0 && samples[i] > samples[i - 1]) {
      cdf += quad::integrate(pdf, samples[i - 1], samples[i], opts).value;
    }
    const double upper = static_cast<double>(i + 1) / count;
    const double lower = static_cast<double>(i) / count;
    d = std::max({d, upper - cdf, cdf - lower});
  }
  return d;
}

std::vector<NormalizationAuditEntry> normalization_audit(int n, long k) {
  std::vector<NormalizationAuditEntry> out;
  const quad::Options opts{1e-11, 0.0};
  for (const auto& triple : admissible_triples()) {
    const auto s = builtin_h(triple);
    NormalizationAuditEntry e;
    e.structure = s.alias();
    e.triple = triple.to_string();
    e.n = n;
    e.k = k;
    e.measured_mass = normalization_check(s, n, k, opts);
    const auto printed = s.printed_normalization(n, k);
    e.printed_formula = printed.formula;
    e.printed_mass_analytic = printed.mass_as_printed;
    e.printed_consistent = printed.consistent;
    e.note = printed.note;
    const Interval sup = s.support();
    auto pdf = [&](double t) { return s.printed_density(n, k, t); };
    if (std::isfinite(printed.mass_as_printed)) {
      e.printed_mass_measured =
          quad::integrate(pdf, sup.lo, sup.hi, opts, s.breakpoints(n, k)).value;
    } else {
      e.printed_mass_measured = kNaN;
      if (s.kind() == HKind::inverse_gamma) {
        for (double eps : {1e-1, 1e-2, 1e-3}) {
          e.printed_partial_masses.push_back(
              quad::integrate(pdf, eps, sup.hi, quad::Options{1e-9, 1e-12}).value);
        }
      }
    }
    out.push_back(std::move(e));
  }

  const double dn = n;
  const double dk = static_cast<double>(k);
  {
    const auto s = builtin_h("gamma");
    NormalizationAuditEntry e;
    e.structure = "gamma (t^(k+1) variant)";
    e.triple = s.triple().to_string();
    e.n = n;
    e.k = k;
    e.measured_mass = normalization_check(s, n, k, opts);
    e.printed_formula = "exp(-n t) n^(k+1) t^(k+1) / k!";
    e.printed_mass_analytic = (dk + 1.0) / dn;
    e.printed_consistent = (k + 1 == n);
    e.note = "t^(k+1) variant has mass (k+1)/n and mean (k+2)/n; the t^k kernel is used";
    auto pdf = [&](double t) {
      return std::exp(-dn * t + (dk + 1.0) * std::log(dn) + (dk + 1.0) * std::log(t) -
                      std::lgamma(dk + 1.0));
    };
    e.printed_mass_measured =
        quad::integrate(pdf, 0.0, std::numeric_limits<double>::infinity(), opts,
                        s.breakpoints(n, k))
            .value;
    out.push_back(std::move(e));
  }
  if (n >= 3) {
    const auto s = builtin_h("betaprime");
    NormalizationAuditEntry e;
    e.structure = "betaprime (C(n+k+1,k) variant)";
    e.triple = s.triple().to_string();
    e.n = n;
    e.k = k;
    e.measured_mass = normalization_check(s, n, k, opts);
    e.printed_formula = "(n-1) C(n+k+1,k) t^k (1+t)^(-n-k)";
    e.printed_mass_analytic = (dn + dk + 1.0) * (dn + dk) / (dn * (dn + 1.0));
    e.printed_consistent = (k == 0);
    e.note = "binomial index n+k+1 differs from the (1,1,0) structure; mass is "
             "(n+k+1)(n+k)/(n(n+1))";
    auto pdf = [&](double t) {
      const double lc = std::log(dn - 1.0) + std::lgamma(dn + dk + 2.0) - std::lgamma(dk + 1.0) -
                        std::lgamma(dn + 2.0);
      return std::exp(lc + (k == 0 ? 0.0 : dk * std::log(t)) - (dn + dk) * std::log1p(t));
    };
    e.printed_mass_measured =
        quad::integrate(pdf, 0.0, std::numeric_limits<double>::infinity(), opts,
                        s.breakpoints(n, k))
            .value;
    out.push_back(std::move(e));
  }
  return out;
}

} // namespace mixexp::oracle
