#pragma once

#include "mixexp/ratpoly.hpp"

#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mixexp {

/// Interval of the real line; either end may be infinite (and is then open).
struct Interval {
  double lo = 0.0;
  double hi = std::numeric_limits<double>::infinity();
  bool lo_closed = true;
  bool hi_closed = false;

  bool contains(double x) const;
  bool interior(double x) const { return x > lo && x < hi; }
  bool bounded() const;
  std::string to_string() const;
};

/// Generating function omega(y) = sum_k a_k y^k with a_k >= 0.
struct PowerSeriesFamily {
  std::string name;
  std::function<Rational(long)> coeff;
  /// Radius of convergence R (may be +inf).
  double radius = std::numeric_limits<double>::infinity();
  std::function<double(double)> omega;
  std::function<double(double)> omega_prime;
  std::function<double(double)> omega_second;
  /// Index of the last nonzero coefficient when omega is a polynomial.
  std::optional<long> polynomial_degree;

  /// Family given by a finite list of coefficients a_0..a_d (omega is then a
  /// polynomial). A finite radius marks the list as a truncated prefix.
  static PowerSeriesFamily from_coefficients(std::string name, std::vector<Rational> coeffs,
                                             double radius = std::numeric_limits<double>::infinity());
};

enum class FamilyKind { binomial, poisson, negative_binomial, catalan, generic };

struct KernelWeight {
  int n = 0;
  long k = 0;
  double x = 0.0;
  double value = 0.0;
};

/// Discrete statistical structure: weights b_{n,k}(x) on k = 0, 1, 2, ...
/// with mean n x and variance n b(x), where b is the covariance
/// characteristic. Built-in families use closed forms; generic families are
/// assembled from omega by series self-convolution.
///
/// Copies share the coefficient cache of generic families; the cache is
/// write-once per n and safe for concurrent readers.
class DiscreteStructure {
public:
  DiscreteStructure(FamilyKind kind, PowerSeriesFamily family, Interval domain,
                    std::optional<RatPoly> covariance);

  FamilyKind kind() const { return kind_; }
  const std::string& name() const { return family_.name; }
  const PowerSeriesFamily& family() const { return family_; }
  const Interval& domain() const { return domain_; }
  /// b(x) as an exact polynomial, when it is one (all built-in families).
  const std::optional<RatPoly>& covariance_poly() const { return covariance_; }

  /// Inverse of x = y omega'(y)/omega(y).
  double solve_y(double x) const;
  double covariance_characteristic(double x) const;
  double fisher_information(int n, double x) const;

  double weight(int n, long k, double x) const;
  /// log b_{n,k}(x); -inf where the weight vanishes.
  double log_weight(int n, long k, double x) const;
  KernelWeight kernel(int n, long k, double x) const { return {n, k, x, weight(n, k, x)}; }

  /// Largest k with nonzero weight (n for binomial, effectively unbounded
  /// otherwise).
  long support_max(int n) const;

  /// Smallest K with sum_{k<=K} b_{n,k}(x) >= 1 - tail (or a geometric bound on
  /// the remaining tail below `tail`) and
  /// K >= n x + 12 sqrt(n b(x)) + 20 (clamped to the support).
  /// Throws TruncationError when K would exceed max_k.
  long truncation_index(int n, double x, double tail = 1e-14, long max_k = 1'000'000) const;

  /// Weights b_{n,0..K}(x) with K from truncation_index.
  std::vector<double> weights(int n, double x, double tail = 1e-14, long max_k = 1'000'000) const;

private:
  struct CoefficientCache;

  void check_n(int n) const;
  void check_domain(double x) const;
  double x_of_y(double y) const;
  long double log_power_coefficient(int n, long k) const;

  FamilyKind kind_;
  PowerSeriesFamily family_;
  Interval domain_;
  std::optional<RatPoly> covariance_;
  std::shared_ptr<CoefficientCache> cache_;
};

/// "binomial", "poisson", "negative_binomial" or "catalan".
DiscreteStructure builtin_family(std::string_view name);

/// Structure built from an arbitrary generating function.
DiscreteStructure make_generic_family(PowerSeriesFamily family);

std::string to_string(FamilyKind kind);

} // namespace mixexp
