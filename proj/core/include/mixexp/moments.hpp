#pragma once

#include "mixexp/ratpoly.hpp"
#include "mixexp/structure_h.hpp"

#include <vector>

namespace mixexp {

/// Highest moment order any table will compute.
inline constexpr int kMaxMomentOrder = 12;

/// Central moments beta_m(x) of a discrete structure about n x.
struct MomentTableB {
  int n = 0;
  RatPoly covariance;
  std::vector<RatPoly> entries; ///< entries[m] = beta_m(x)
};

/// Central moments nu_m of h_{n,k} about its mean alpha_1.
struct MomentTableH {
  QuadraticTriple triple;
  int n = 0;
  long k = 0;
  Rational alpha1;
  std::vector<Rational> entries; ///< entries[m] = nu_m
};

/// Central moments mu_m(x) of the mixture sum_k b_{n,k}(x) h_{n,k}(t) about
/// alpha(x).
struct MomentTablePhillips {
  int n = 0;
  QuadraticTriple triple;
  RatPoly covariance;
  RatPoly alpha;
  std::vector<RatPoly> entries; ///< entries[m] = mu_m(x)
};

/// beta_{m+1} = b (beta_m' + n m beta_{m-1}), beta_0 = 1, beta_1 = 0.
MomentTableB beta_moments(const RatPoly& b_poly, int n, int m_max);

/// Leading coefficient c_m in beta_m ~ c_m n^r b^r (m = 2r) or
/// c_m n^r b^r b' (m = 2r + 1).
Rational asymptotic_coefficient(int m);

/// Mean (k + b)/(n - 2a) of h_{n,k}. Requires n > 2a.
Rational h_alpha1(const QuadraticTriple& triple, int n, long k);

MomentTableH nu_moments(const QuadraticTriple& triple, int n, long k, int m_max);

/// (k+b)(ak+bn-ab)/((n-2a)^2 (n-3a)) + c/(n-3a). Requires n > 3a.
Rational nu2_closed_form(const QuadraticTriple& triple, int n, long k);

/// alpha(x) = (n x + b)/(n - 2a).
RatPoly phillips_alpha(const Rational& b_coeff, const Rational& a_coeff, int n);

MomentTablePhillips mu_moments(const RatPoly& b_poly, const QuadraticTriple& triple, int n,
                               int m_max);

/// (a alpha^2 + b alpha + c + b(x) n/(n-2a)) / (n - 3a).
RatPoly mu2_closed_form(const RatPoly& b_poly, const QuadraticTriple& triple, int n);

/// (x + b(x))/n + 1/n^2, the second moment stated for the gamma-type
/// continuous kernel.
RatPoly mu2_gamma_kernel_printed(const RatPoly& b_poly, int n);

/// ((nx+1)/(n-2))^2 + (nx+1)/(n-2) + n b(x)/(n-2), all over n - 3; the
/// second moment stated for the beta-prime continuous kernel.
RatPoly mu2_beta_prime_kernel_printed(const RatPoly& b_poly, int n);

Rational moment_numeric(const MomentTableB& table, const Rational& x, int m);
Rational moment_numeric(const MomentTableH& table, int m);
Rational moment_numeric(const MomentTablePhillips& table, const Rational& x, int m);

} // namespace mixexp
