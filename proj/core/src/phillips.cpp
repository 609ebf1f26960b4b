#include "mixexp/phillips.hpp"

#include "mixexp/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <shared_mutex>
#include <sstream>
#include <thread>

namespace mixexp {

OperatorPreset make_preset(std::string_view name) {
  if (name == "phillips") {
    return {PresetKind::phillips, "phillips", builtin_family("poisson"), builtin_h("gamma"), 1};
  }
  if (name == "bernstein_durrmeyer") {
    return {PresetKind::bernstein_durrmeyer, "bernstein_durrmeyer", builtin_family("binomial"),
            builtin_h("beta"), 1};
  }
  if (name == "szasz_baskakov") {
    return {PresetKind::szasz_baskakov, "szasz_baskakov", builtin_family("poisson"),
            builtin_h("betaprime"), 4};
  }
  if (name == "durrmeyer_beta") {
    return {PresetKind::durrmeyer_beta, "durrmeyer_beta", builtin_family("negative_binomial"),
            builtin_h("betaprime"), 4};
  }
  throw UnknownPreset("unknown preset '" + std::string(name) +
                      "' (expected phillips, bernstein_durrmeyer, szasz_baskakov or "
                      "durrmeyer_beta)");
}

OperatorPreset make_custom_preset(DiscreteStructure discrete, ContinuousStructure continuous) {
  std::string name = discrete.name() + "+" + continuous.alias();
  const int min_n = continuous.min_n();
  return {PresetKind::custom, std::move(name), std::move(discrete), std::move(continuous), min_n};
}

std::string to_string(PresetKind kind) {
  switch (kind) {
  case PresetKind::phillips:
    return "phillips";
  case PresetKind::bernstein_durrmeyer:
    return "bernstein_durrmeyer";
  case PresetKind::szasz_baskakov:
    return "szasz_baskakov";
  case PresetKind::durrmeyer_beta:
    return "durrmeyer_beta";
  case PresetKind::custom:
    return "custom";
  }
  return "custom";
}

struct PhillipsOperator::Cache {
  std::shared_mutex mutex;
  std::map<long, double> integrals;
};

PhillipsOperator::PhillipsOperator(OperatorPreset preset, TestFunction f, int n, EvalConfig cfg)
    : preset_(std::move(preset)), f_(std::move(f)), n_(n), cfg_(cfg),
      cache_(std::make_shared<Cache>()) {
  if (n_ < preset_.min_n) {
    throw ParameterError("preset " + preset_.name + " needs n >= " +
                         std::to_string(preset_.min_n) + ", got " + std::to_string(n_));
  }
  if (!(cfg_.series_tolerance > 0.0) || !(cfg_.quad_abs_tol > 0.0) || cfg_.max_k < 1) {
    throw ParameterError("evaluation tolerances must be positive and max_k >= 1");
  }
  // f must be integrable against the heaviest kernel tail |t|^{-n}.
  const double tail = preset_.continuous.tail_exponent(n_);
  if (std::isfinite(tail) && !(tail - f_.growth_order > 1.0)) {
    std::ostringstream msg;
    msg << "f = " << f_.name << " grows like |t|^" << f_.growth_order
        << " and is not integrable against " << preset_.continuous.alias()
        << " kernels at n = " << n_ << " (needs n > " << f_.growth_order + 1.0 << ")";
    throw ParameterError(msg.str());
  }
}

double PhillipsOperator::inner_integral(long k) const {
  {
    std::shared_lock lock(cache_->mutex);
    if (auto it = cache_->integrals.find(k); it != cache_->integrals.end()) {
      return it->second;
    }
  }
  const quad::Options opts{cfg_.quad_abs_tol, cfg_.quad_rel_tol};
  const double v = preset_.continuous.expectation(n_, k, f_.f, opts, f_.kinks);
  std::unique_lock lock(cache_->mutex);
  // Another thread may have filled k meanwhile; both computed the same value.
  return cache_->integrals.emplace(k, v).first->second;
}

double PhillipsOperator::evaluate(double x) const {
  const auto& disc = preset_.discrete;
  const long top = disc.truncation_index(n_, x, cfg_.series_tolerance, cfg_.max_k);
  double sum = 0.0;
  for (long k = 0; k <= top; ++k) {
    const double w = disc.weight(n_, k, x);
    if (w < 1e-20) {
      continue;
    }
    sum += w * inner_integral(k);
  }
  return sum;
}

double evaluate(const OperatorPreset& preset, const TestFunction& f, int n, double x,
                const EvalConfig& cfg) {
  return PhillipsOperator(preset, f, n, cfg).evaluate(x);
}

bool GridResult::ok() const {
  return std::none_of(errors.begin(), errors.end(), [](const auto& e) { return e.has_value(); });
}

GridResult evaluate_grid(const OperatorPreset& preset, const TestFunction& f, int n,
                         std::span<const double> xs, const EvalConfig& cfg) {
  GridResult out;
  out.xs.assign(xs.begin(), xs.end());
  out.values.assign(xs.size(), std::numeric_limits<double>::quiet_NaN());
  out.errors.assign(xs.size(), std::nullopt);
  std::optional<PhillipsOperator> op;
  try {
    op.emplace(preset, f, n, cfg);
  } catch (const Error& e) {
    std::fill(out.errors.begin(), out.errors.end(), std::string(e.what()));
    return out;
  }
  auto run = [&](std::size_t i) {
    try {
      out.values[i] = op->evaluate(xs[i]);
    } catch (const Error& e) {
      out.errors[i] = e.what();
    }
  };
  const std::size_t workers =
      std::min<std::size_t>(xs.size(), std::max(1u, std::thread::hardware_concurrency()));
  if (workers <= 1) {
    for (std::size_t i = 0; i < xs.size(); ++i) {
      run(i);
    }
    return out;
  }
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t i = w; i < xs.size(); i += workers) {
          run(i);
        }
      });
    }
  }
  return out;
}

std::vector<double> linspace(double lo, double hi, int count) {
  if (count < 1) {
    throw ParameterError("grid needs at least one point");
  }
  if (count == 1) {
    return {lo};
  }
  std::vector<double> v(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    v[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (count - 1);
  }
  v.back() = hi;
  return v;
}

} // namespace mixexp
