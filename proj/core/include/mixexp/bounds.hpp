#pragma once

#include "mixexp/phillips.hpp"
#include "mixexp/test_function.hpp"

#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace mixexp {

/// omega(1/sqrt n) (1 + n/(n-3a) (a u^2 + b u + b(x) n/(n-2a))) + omega(|(2ax+b)/(n-2a)|)
/// with u = (nx+b)/(n-2a). The constant term c of h does not enter.
/// Throws ParameterError unless n > 3a (and n > 2a).
double theorem2_bound(const ModulusOfContinuity& omega, const QuadraticTriple& triple,
                      double b_of_x, int n, double x);

/// The general bound for a preset, with b(x) taken from its discrete kernel.
double theorem2_bound(const ModulusOfContinuity& omega, const OperatorPreset& preset, int n,
                      double x);

/// Closed-form bounds stated for the four classical operators:
///   phillips             omega(1/sqrt n)(1 + x + x^2)
///   bernstein_durrmeyer  omega(1/sqrt n)/4 + omega(1/n)
///   szasz_baskakov       omega(1/sqrt n)(1 + n (n^2x^2 + 2n^2x - 2nx + n - 2)/((n-2)^2(n-3)))
///                          + omega((2x+1)/(n-2)),  n > 3
///   durrmeyer_beta       omega(1/sqrt n)(1 + n/(n-3)(((nx+1)/(n-2))^2 + (nx^2+2nx+1)/(n-2)))
///                          + omega(|(2x+1)/(n-2)|),  n > 3
/// Throws UnknownPreset for custom pairings.
double specialized_bound(PresetKind preset, const ModulusOfContinuity& omega, int n, double x);
double specialized_bound(std::string_view preset_name, const ModulusOfContinuity& omega, int n,
                         double x);

struct BoundReport {
  int n = 0;
  double x = 0.0;
  double general_bound = 0.0;
  std::optional<double> specialized_bound;
  double empirical_error = 0.0;
  /// empirical_error <= general_bound + 1e-9
  bool dominated = false;
};

/// max over xs of |P_n(f, x) - f(x)|.
double empirical_error(const OperatorPreset& preset, const TestFunction& f, int n,
                       std::span<const double> xs, const EvalConfig& cfg = {});

/// Per-point comparison of the actual error with the bounds. f must carry a
/// modulus (ParameterError otherwise).
std::vector<BoundReport> bound_check(const OperatorPreset& preset, const TestFunction& f, int n,
                                     std::span<const double> xs, const EvalConfig& cfg = {});

} // namespace mixexp
