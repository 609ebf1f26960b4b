#include "mixexp/bounds.hpp"

#include "mixexp/errors.hpp"

#include <algorithm>
#include <cmath>

namespace mixexp {

double theorem2_bound(const ModulusOfContinuity& omega, const QuadraticTriple& triple,
                      double b_of_x, int n, double x) {
  const double a = to_double(triple.a);
  const double b = to_double(triple.b);
  const double dn = n;
  if (!(dn > 3.0 * a) || !(dn > 2.0 * a)) {
    throw ParameterError("general bound needs n > 3a");
  }
  const double n2a = dn - 2.0 * a;
  const double u = (dn * x + b) / n2a;
  const double spread = dn / (dn - 3.0 * a) * (a * u * u + b * u + b_of_x * dn / n2a);
  return omega(1.0 / std::sqrt(dn)) * (1.0 + spread) + omega(std::abs((2.0 * a * x + b) / n2a));
}

double theorem2_bound(const ModulusOfContinuity& omega, const OperatorPreset& preset, int n,
                      double x) {
  return theorem2_bound(omega, preset.continuous.triple(),
                        preset.discrete.covariance_characteristic(x), n, x);
}

double specialized_bound(PresetKind preset, const ModulusOfContinuity& omega, int n, double x) {
  const double dn = n;
  if (n < 1) {
    throw ParameterError("n must be positive");
  }
  const double w = omega(1.0 / std::sqrt(dn));
  switch (preset) {
  case PresetKind::phillips:
    if (x < 0.0) {
      throw DomainError("phillips bound holds for x >= 0");
    }
    return w * (1.0 + x + x * x);
  case PresetKind::bernstein_durrmeyer:
    if (x < 0.0 || x > 1.0) {
      throw DomainError("bernstein_durrmeyer bound holds on [0, 1]");
    }
    return 0.25 * w + omega(1.0 / dn);
  case PresetKind::szasz_baskakov: {
    if (n <= 3) {
      throw ParameterError("szasz_baskakov bound needs n > 3");
    }
    if (x < 0.0) {
      throw DomainError("szasz_baskakov bound holds for x >= 0");
    }
    const double num = dn * dn * x * x + 2.0 * dn * dn * x - 2.0 * dn * x + dn - 2.0;
    const double den = (dn - 2.0) * (dn - 2.0) * (dn - 3.0);
    return w * (1.0 + num / den * dn) + omega((2.0 * x + 1.0) / (dn - 2.0));
  }
  case PresetKind::durrmeyer_beta: {
    if (n <= 3) {
      throw ParameterError("durrmeyer_beta bound needs n > 3");
    }
    if (x < 0.0) {
      throw DomainError("durrmeyer_beta bound holds for x > 0");
    }
    const double u = (dn * x + 1.0) / (dn - 2.0);
    const double inner = u * u + (dn * x * x + 2.0 * dn * x + 1.0) / (dn - 2.0);
    return w * (1.0 + dn / (dn - 3.0) * inner) +
           omega(std::abs((2.0 * x + 1.0) / (dn - 2.0)));
  }
  case PresetKind::custom:
    break;
  }
  throw UnknownPreset("no specialized bound for custom pairings");
}

double specialized_bound(std::string_view preset_name, const ModulusOfContinuity& omega, int n,
                         double x) {
  return specialized_bound(make_preset(preset_name).kind, omega, n, x);
}

double empirical_error(const OperatorPreset& preset, const TestFunction& f, int n,
                       std::span<const double> xs, const EvalConfig& cfg) {
  const PhillipsOperator op(preset, f, n, cfg);
  double worst = 0.0;
  for (double x : xs) {
    worst = std::max(worst, std::abs(op.evaluate(x) - f(x)));
  }
  return worst;
}

std::vector<BoundReport> bound_check(const OperatorPreset& preset, const TestFunction& f, int n,
                                     std::span<const double> xs, const EvalConfig& cfg) {
  if (!f.modulus) {
    throw ParameterError("function " + f.name + " has no declared modulus of continuity");
  }
  const PhillipsOperator op(preset, f, n, cfg);
  std::vector<BoundReport> out;
  out.reserve(xs.size());
  for (double x : xs) {
    BoundReport r;
    r.n = n;
    r.x = x;
    r.general_bound = theorem2_bound(*f.modulus, preset, n, x);
    if (preset.kind != PresetKind::custom) {
      try {
        r.specialized_bound = specialized_bound(preset.kind, *f.modulus, n, x);
      } catch (const ParameterError&) {
      } catch (const DomainError&) {
      }
    }
    r.empirical_error = std::abs(op.evaluate(x) - f(x));
    r.dominated = r.empirical_error <= r.general_bound + 1e-9;
    out.push_back(r);
  }
  return out;
}

} // namespace mixexp
