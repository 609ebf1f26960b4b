#include "mixexp/quadrature.hpp"

#include "mixexp/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace mixexp::quad {
namespace {

// Gauss-Kronrod 10/21 abscissae and weights (QUADPACK qk21).
constexpr std::array<double, 11> kXgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};
constexpr std::array<double, 11> kWgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077600525417287, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
constexpr std::array<double, 5> kWg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

enum class Map { identity, upper_half, lower_half, whole_line };

struct Segment {
  double lo;
  double hi;
  Map map;
  double anchor; // finite endpoint for half-line maps
  double value;
  double error;
  bool operator<(const Segment& other) const { return error < other.error; }
};

struct MappedIntegrand {
  const Integrand& f;
  int evaluations = 0;

  double operator()(double u, Map map, double anchor) {
    ++evaluations;
    double t = u;
    double jac = 1.0;
    switch (map) {
    case Map::identity:
      break;
    case Map::upper_half: {
      const double w = 1.0 - u;
      t = anchor + u / w;
      jac = 1.0 / (w * w);
      break;
    }
    case Map::lower_half: {
      const double w = 1.0 - u;
      t = anchor - u / w;
      jac = 1.0 / (w * w);
      break;
    }
    case Map::whole_line: {
      const double w = 1.0 - u * u;
      t = u / w;
      jac = (1.0 + u * u) / (w * w);
      break;
    }
    }
    if (!std::isfinite(t)) {
      return 0.0;
    }
    const double v = f(t);
    if (!std::isfinite(v)) {
      throw QuadratureError("integrand is not finite at t = " + std::to_string(t));
    }
    return v == 0.0 ? 0.0 : v * jac;
  }
};

void apply_rule(MappedIntegrand& g, Segment& s) {
  const double center = 0.5 * (s.lo + s.hi);
  const double half = 0.5 * (s.hi - s.lo);
  const double fc = g(center, s.map, s.anchor);
  double resk = fc * kWgk[10];
  double resg = 0.0;
  double resabs = std::abs(resk);
  std::array<double, 10> f1{};
  std::array<double, 10> f2{};
  for (std::size_t j = 0; j < 10; ++j) {
    const double dx = half * kXgk[j];
    f1[j] = g(center - dx, s.map, s.anchor);
    f2[j] = g(center + dx, s.map, s.anchor);
    const double sum = f1[j] + f2[j];
    resk += kWgk[j] * sum;
    resabs += kWgk[j] * (std::abs(f1[j]) + std::abs(f2[j]));
    if (j % 2 == 1) {
      resg += kWg[j / 2] * sum;
    }
  }
  const double mean = 0.5 * resk;
  double resasc = kWgk[10] * std::abs(fc - mean);
  for (std::size_t j = 0; j < 10; ++j) {
    resasc += kWgk[j] * (std::abs(f1[j] - mean) + std::abs(f2[j] - mean));
  }
  resasc *= std::abs(half);
  resabs *= std::abs(half);

  s.value = resk * half;
  double err = std::abs((resk - resg) * half);
  if (resasc != 0.0 && err != 0.0) {
    err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  }
  constexpr double kEps = std::numeric_limits<double>::epsilon();
  constexpr double kUflow = std::numeric_limits<double>::min();
  if (resabs > kUflow / (50.0 * kEps)) {
    err = std::max(50.0 * kEps * resabs, err);
  }
  s.error = err;
}

bool splittable(const Segment& s) {
  const double mid = 0.5 * (s.lo + s.hi);
  const double scale = std::max({std::abs(s.lo), std::abs(s.hi), 1e-300});
  return (s.hi - s.lo) > 64.0 * std::numeric_limits<double>::epsilon() * scale && mid > s.lo &&
         mid < s.hi;
}

} // namespace

Result integrate(const Integrand& f, double a, double b, const Options& opts,
                 std::span<const double> breakpoints) {
  if (std::isnan(a) || std::isnan(b)) {
    throw QuadratureError("NaN integration limit");
  }
  if (a == b) {
    return {};
  }
  if (a > b) {
    Result r = integrate(f, b, a, opts, breakpoints);
    r.value = -r.value;
    return r;
  }

  std::vector<double> cuts;
  cuts.push_back(a);
  for (double p : breakpoints) {
    if (std::isfinite(p) && p > a && p < b) {
      cuts.push_back(p);
    }
  }
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  MappedIntegrand g{f};
  std::priority_queue<Segment> heap;
  std::vector<Segment> frozen;
  const double inf = std::numeric_limits<double>::infinity();

  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double lo = cuts[i];
    const double hi = cuts[i + 1];
    Segment s{};
    if (lo == -inf && hi == inf) {
      s = {-1.0, 1.0, Map::whole_line, 0.0, 0.0, 0.0};
    } else if (hi == inf) {
      s = {0.0, 1.0, Map::upper_half, lo, 0.0, 0.0};
    } else if (lo == -inf) {
      s = {0.0, 1.0, Map::lower_half, hi, 0.0, 0.0};
    } else {
      s = {lo, hi, Map::identity, 0.0, 0.0, 0.0};
    }
    apply_rule(g, s);
    heap.push(s);
  }

  auto totals = [&] {
    double value = 0.0;
    double error = 0.0;
    auto copy = heap;
    while (!copy.empty()) {
      value += copy.top().value;
      error += copy.top().error;
      copy.pop();
    }
    for (const auto& s : frozen) {
      value += s.value;
      error += s.error;
    }
    return std::pair{value, error};
  };

  double value = 0.0;
  double error = 0.0;
  std::tie(value, error) = totals();
  int segments = static_cast<int>(heap.size());
  while (error > std::max(opts.abs_tol, opts.rel_tol * std::abs(value))) {
    if (heap.empty()) {
      break;
    }
    if (segments >= opts.max_subintervals) {
      throw QuadratureError("adaptive quadrature did not converge within " +
                            std::to_string(opts.max_subintervals) +
                            " subintervals (error estimate " + std::to_string(error) + ")");
    }
    Segment worst = heap.top();
    heap.pop();
    if (!splittable(worst)) {
      frozen.push_back(worst);
      continue;
    }
    const double mid = 0.5 * (worst.lo + worst.hi);
    Segment left{worst.lo, mid, worst.map, worst.anchor, 0.0, 0.0};
    Segment right{mid, worst.hi, worst.map, worst.anchor, 0.0, 0.0};
    apply_rule(g, left);
    apply_rule(g, right);
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++segments;
    // Recompute occasionally to stop drift in the running sums.
    if (segments % 256 == 0) {
      std::tie(value, error) = totals();
    }
  }
  std::tie(value, error) = totals();
  const double target = std::max(opts.abs_tol, opts.rel_tol * std::abs(value));
  // Roundoff-limited segments may leave the estimate a little above target.
  if (error > 1e3 * target) {
    throw QuadratureError("quadrature limited by roundoff; error estimate " +
                          std::to_string(error));
  }
  return {value, error, segments, g.evaluations};
}

} // namespace mixexp::quad
