#pragma once

#include "mixexp/structure_b.hpp"
#include "mixexp/structure_h.hpp"
#include "mixexp/test_function.hpp"

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mixexp {

enum class PresetKind { phillips, bernstein_durrmeyer, szasz_baskakov, durrmeyer_beta, custom };

/// A discrete kernel b_{n,k}(x) paired with a continuous kernel h_{n,k}(t).
struct OperatorPreset {
  PresetKind kind = PresetKind::custom;
  std::string name;
  DiscreteStructure discrete;
  ContinuousStructure continuous;
  int min_n = 1;
};

/// phillips (poisson x gamma), bernstein_durrmeyer (binomial x beta),
/// szasz_baskakov (poisson x betaprime), durrmeyer_beta
/// (negative_binomial x betaprime).
OperatorPreset make_preset(std::string_view name);
OperatorPreset make_custom_preset(DiscreteStructure discrete, ContinuousStructure continuous);

std::string to_string(PresetKind kind);

struct EvalConfig {
  /// Bound on the discrete mass left out of the series.
  double series_tolerance = 1e-12;
  double quad_abs_tol = 1e-11;
  double quad_rel_tol = 1e-13;
  long max_k = 10'000;
};

/// P_n(f, x) = sum_k b_{n,k}(x) integral f(t) h_{n,k}(t) dt for a fixed
/// (preset, f, n).
///
/// The inner integrals do not depend on x, so they are cached per k. The
/// cache is shared by copies and filled write-once under a lock; evaluation
/// is otherwise pure and may run concurrently.
class PhillipsOperator {
public:
  PhillipsOperator(OperatorPreset preset, TestFunction f, int n, EvalConfig cfg = {});

  double operator()(double x) const { return evaluate(x); }
  double evaluate(double x) const;
  /// integral f(t) h_{n,k}(t) dt
  double inner_integral(long k) const;

  const OperatorPreset& preset() const { return preset_; }
  int n() const { return n_; }

private:
  struct Cache;

  OperatorPreset preset_;
  TestFunction f_;
  int n_;
  EvalConfig cfg_;
  std::shared_ptr<Cache> cache_;
};

double evaluate(const OperatorPreset& preset, const TestFunction& f, int n, double x,
                const EvalConfig& cfg = {});

struct GridResult {
  std::vector<double> xs;
  std::vector<double> values;              ///< NaN where the point failed
  std::vector<std::optional<std::string>> errors;

  bool ok() const;
};

/// Evaluates every grid point (concurrently when hardware allows); a failing
/// point records its error and does not stop the others.
GridResult evaluate_grid(const OperatorPreset& preset, const TestFunction& f, int n,
                         std::span<const double> xs, const EvalConfig& cfg = {});

/// `count` equally spaced points on [lo, hi].
std::vector<double> linspace(double lo, double hi, int count);

} // namespace mixexp
