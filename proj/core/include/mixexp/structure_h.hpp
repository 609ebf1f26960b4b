#pragma once

#include "mixexp/quadrature.hpp"
#include "mixexp/ratpoly.hpp"
#include "mixexp/structure_b.hpp"

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mixexp {

/// Coefficients of the quadratic covariance characteristic h(t) = a t^2 + b t + c.
struct QuadraticTriple {
  Rational a;
  Rational b;
  Rational c;

  RatPoly as_poly() const { return RatPoly({c, b, a}); }
  double h(double t) const;
  /// "a,b,c"
  std::string to_string() const;

  friend bool operator==(const QuadraticTriple&, const QuadraticTriple&) = default;
};

/// Accepts "a,b,c" or one of the aliases beta, betaprime, gamma, invgamma,
/// gauss, arctan.
QuadraticTriple parse_triple(std::string_view text);

enum class HKind { beta, beta_prime, gamma, inverse_gamma, gauss, arctan };

/// The six admissible triples, in the order (-1,1,0), (1,1,0), (0,1,0),
/// (1,0,0), (0,0,1), (1,0,1).
const std::vector<QuadraticTriple>& admissible_triples();

/// How the literature's printed normalizing constant compares with the exact
/// one used here.
struct PrintedNormalization {
  std::string formula;
  /// Total mass of the density when normalized with the printed constant;
  /// +inf when the printed density is not integrable.
  double mass_as_printed = 1.0;
  bool consistent = true;
  std::string note;
};

/// Continuous structure H: densities h_{n,k}(t) with
///   h(t) d/dt h_{n,k}(t) = (k - n t) h_{n,k}(t).
/// Normalizing constants are exact (Beta/Gamma integrals and a closed
/// product for the arctan family), not the printed ones.
class ContinuousStructure {
public:
  ContinuousStructure(HKind kind, QuadraticTriple triple);

  HKind kind() const { return kind_; }
  const QuadraticTriple& triple() const { return triple_; }
  /// Alias such as "gamma".
  std::string alias() const;
  Interval support() const;
  /// Smallest admissible n.
  int min_n() const;

  /// Throws ParameterError if (n, k) is outside the structure's range.
  void validate(int n, long k) const;

  /// The (1,0,0) family at k = 0 collapses to a point mass at t = 0
  /// (the limit of t^{-n} exp(-k/t) as k -> 0).
  bool degenerate(int n, long k) const;

  double log_norm_const(int n, long k) const;
  double norm_const(int n, long k) const;
  double log_density(int n, long k, double t) const;
  /// Zero outside the support.
  double density(int n, long k, double t) const;

  /// Density exactly as printed in the literature (typos included); used by
  /// the normalization audit only.
  double printed_density(int n, long k, double t) const;
  PrintedNormalization printed_normalization(int n, long k) const;

  /// The density decays like |t|^{-tail_exponent(n)}; +inf for light tails.
  double tail_exponent(int n) const;

  /// Points at which to split the support for quadrature: the mode k/n and
  /// multiples of the local scale sqrt(h(k/n)/n) around it.
  std::vector<double> breakpoints(int n, long k) const;

  /// Integral of f(t) h_{n,k}(t) dt over the support.
  double expectation(int n, long k, const std::function<double(double)>& f,
                     const quad::Options& opts = {},
                     std::span<const double> extra_breakpoints = {}) const;

private:
  double log_shape(int n, long k, double t) const;

  HKind kind_;
  QuadraticTriple triple_;
};

/// Throws InadmissibleTriple unless the triple is one of the six.
ContinuousStructure builtin_h(const QuadraticTriple& triple);
ContinuousStructure builtin_h(std::string_view alias_or_triple);

/// Adaptive-quadrature mass of h_{n,k}; 1 for the degenerate point mass.
double normalization_check(const ContinuousStructure& s, int n, long k,
                           const quad::Options& opts = {});

/// log of the exact integral of exp(k atan t) (1 + t^2)^{-n/2} over the real
/// line, i.e. of exp(k s) cos(s)^{n-2} over (-pi/2, pi/2).
double log_arctan_integral(int n, long k);

std::string to_string(HKind kind);

} // namespace mixexp
