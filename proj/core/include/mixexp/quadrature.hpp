#pragma once

#include <functional>
#include <span>

namespace mixexp::quad {

struct Options {
  double abs_tol = 1e-11;
  double rel_tol = 0.0;
  int max_subintervals = 1 << 15;
};

struct Result {
  double value = 0.0;
  double abs_error = 0.0;
  int subintervals = 0;
  int evaluations = 0;
};

using Integrand = std::function<double(double)>;

/// Global adaptive 21-point Gauss-Kronrod integration of f over [a, b].
///
/// Either endpoint may be infinite. A half-line [a, inf) is mapped by
/// t = a + u/(1-u), the whole line by t = u/(1-u^2). Interior breakpoints
/// (kinks, modes, scale markers) split the range before refinement starts;
/// points outside (a, b) are ignored.
///
/// Throws QuadratureError when the error target is not met within
/// max_subintervals, or when the integrand produces a non-finite value.
Result integrate(const Integrand& f, double a, double b, const Options& opts = {},
                 std::span<const double> breakpoints = {});

} // namespace mixexp::quad
