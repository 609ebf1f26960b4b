#include "mixexp_cli/cli.hpp"

#include "mixexp/bounds.hpp"
#include "mixexp/errors.hpp"
#include "mixexp/moments.hpp"
#include "mixexp/oracle.hpp"
#include "mixexp/phillips.hpp"
#include "mixexp/serialize.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace mixexp::cli {
namespace {

/// Bad or missing options; maps to exit code 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Oracle comparison outside its band; maps to exit code 1.
struct CheckFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string command;
  std::string preset;
  std::string family;
  std::string triple;
  std::optional<int> n;
  std::vector<int> n_list;
  std::optional<long> k;
  int mmax = 4;
  std::optional<double> x_min;
  std::optional<double> x_max;
  int x_count = 11;
  std::optional<double> x;
  std::string function;
  std::string format = "csv";
  std::string out;
  std::uint64_t seed = 20240601;
  long samples = 1'000'000;
};

struct Output {
  std::string text;
  int code = ok;
};

std::optional<OperatorPreset> resolve_operator(const RunConfig& cfg) {
  if (!cfg.preset.empty()) {
    if (!cfg.family.empty() || !cfg.triple.empty()) {
      throw ConfigError("--preset cannot be combined with --family or --triple");
    }
    return make_preset(cfg.preset);
  }
  if (!cfg.family.empty() && !cfg.triple.empty()) {
    return make_custom_preset(builtin_family(cfg.family), builtin_h(cfg.triple));
  }
  return std::nullopt;
}

OperatorPreset require_operator(const RunConfig& cfg) {
  auto op = resolve_operator(cfg);
  if (!op) {
    throw ConfigError("--preset, or --family together with --triple, is required");
  }
  return *op;
}

int require_n(const RunConfig& cfg) {
  if (!cfg.n) {
    throw ConfigError("--n is required");
  }
  if (*cfg.n < 1) {
    throw ConfigError("--n must be positive");
  }
  return *cfg.n;
}

void check_threshold(const OperatorPreset& op, int n) {
  if (n < op.min_n) {
    throw ConfigError(op.name + " needs n >= " + std::to_string(op.min_n) + ", got " +
                      std::to_string(n));
  }
}

TestFunction require_function(const RunConfig& cfg) {
  if (cfg.function.empty()) {
    throw ConfigError("--function is required");
  }
  return parse_function(cfg.function);
}

std::vector<double> make_grid(const RunConfig& cfg, const Interval& domain) {
  const double lo = cfg.x_min.value_or(domain.lo);
  const double hi = cfg.x_max.value_or(domain.bounded() ? domain.hi : 2.0);
  if (cfg.x_count < 1) {
    throw ConfigError("--x-count must be at least 1");
  }
  if (!(lo <= hi)) {
    throw ConfigError("--x-min must not exceed --x-max");
  }
  if (!domain.contains(lo) || !domain.contains(hi)) {
    throw ConfigError("grid [" + format_double(lo) + ", " + format_double(hi) +
                      "] leaves the domain " + domain.to_string());
  }
  if (cfg.x_count == 1) {
    return {lo};
  }
  return linspace(lo, hi, cfg.x_count);
}

bool want_json(const RunConfig& cfg) { return cfg.format == "json"; }

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) {
    return s;
  }
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') {
      q += '"';
    }
    q += c;
  }
  return q + '"';
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

/// Appends numeric values of a polynomial table on the grid.
void polynomial_rows(std::string& csv, Json& entries, const std::vector<RatPoly>& polys,
                     const std::vector<double>& xs) {
  for (std::size_t m = 0; m < polys.size(); ++m) {
    Json values = Json::array();
    const std::string rendered = csv_escape(to_string(polys[m]));
    for (double x : xs) {
      const double v = polys[m].eval(x);
      values.push_back(number_or_null(v));
      csv += std::to_string(m) + ',' + format_double(x) + ',' + format_double(v) + ',' +
             rendered + '\n';
    }
    entries[m]["values"] = std::move(values);
  }
}

Output cmd_moments(const RunConfig& cfg) {
  const int n = require_n(cfg);
  if (cfg.mmax < 0 || cfg.mmax > kMaxMomentOrder) {
    throw ConfigError("--mmax must lie in [0, " + std::to_string(kMaxMomentOrder) + "]");
  }
  Output out;
  const auto op = resolve_operator(cfg);
  if (op) {
    check_threshold(*op, n);
    const auto xs = make_grid(cfg, op->discrete.domain());
    const auto table =
        mu_moments(*op->discrete.covariance_poly(), op->continuous.triple(), n, cfg.mmax);
    Json j = to_json(table, op->name);
    j["x"] = xs;
    std::string csv = "m,x,value,polynomial\n";
    polynomial_rows(csv, j["moments"], table.entries, xs);
    out.text = want_json(cfg) ? dump(j) : csv;
    return out;
  }
  if (!cfg.family.empty()) {
    const auto s = builtin_family(cfg.family);
    const auto xs = make_grid(cfg, s.domain());
    const auto table = beta_moments(*s.covariance_poly(), n, cfg.mmax);
    Json j = to_json(table, s.name());
    j["x"] = xs;
    std::string csv = "m,x,value,polynomial\n";
    polynomial_rows(csv, j["moments"], table.entries, xs);
    out.text = want_json(cfg) ? dump(j) : csv;
    return out;
  }
  if (!cfg.triple.empty()) {
    if (!cfg.k) {
      throw ConfigError("--k is required for the moments of a continuous structure");
    }
    const auto s = builtin_h(cfg.triple);
    s.validate(n, *cfg.k);
    const auto table = nu_moments(s.triple(), n, *cfg.k, cfg.mmax);
    std::string csv = "m,value,exact\n";
    for (std::size_t m = 0; m < table.entries.size(); ++m) {
      csv += std::to_string(m) + ',' + format_double(to_double(table.entries[m])) + ',' +
             to_string(table.entries[m]) + '\n';
    }
    out.text = want_json(cfg) ? dump(to_json(table)) : csv;
    return out;
  }
  throw ConfigError("one of --preset, --family or --triple is required");
}

Output cmd_eval(const RunConfig& cfg) {
  const auto op = require_operator(cfg);
  const int n = require_n(cfg);
  check_threshold(op, n);
  const auto f = require_function(cfg);
  const auto xs = make_grid(cfg, op.discrete.domain());
  const auto grid = evaluate_grid(op, f, n, xs);

  Output out;
  std::string csv = "x,value,f,error\n";
  Json points = Json::array();
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double fx = f(xs[i]);
    const double v = grid.values[i];
    csv += format_double(xs[i]) + ',' + format_double(v) + ',' + format_double(fx) + ',' +
           format_double(v - fx) + '\n';
    Json p{{"x", xs[i]},
           {"value", number_or_null(v)},
           {"f", number_or_null(fx)},
           {"error", number_or_null(v - fx)}};
    if (grid.errors[i]) {
      p["failure"] = *grid.errors[i];
      out.code = compute_error;
    }
    points.push_back(std::move(p));
  }
  Json j{{"command", "eval"},
         {"preset", op.name},
         {"n", n},
         {"function", f.name},
         {"points", std::move(points)}};
  out.text = want_json(cfg) ? dump(j) : csv;
  return out;
}

/// Largest value of bound(x) over the grid, or NaN if the bound does not
/// apply.
template <class Bound> double sup_over(const std::vector<double>& xs, Bound bound) {
  double s = 0.0;
  for (double x : xs) {
    s = std::max(s, bound(x));
  }
  return s;
}

Output cmd_converge(const RunConfig& cfg) {
  const auto op = require_operator(cfg);
  if (cfg.n_list.empty()) {
    throw ConfigError("--n-list is required");
  }
  for (std::size_t i = 0; i < cfg.n_list.size(); ++i) {
    check_threshold(op, cfg.n_list[i]);
    if (i > 0 && cfg.n_list[i] <= cfg.n_list[i - 1]) {
      throw ConfigError("--n-list must be strictly ascending");
    }
  }
  const auto f = require_function(cfg);
  const auto xs = make_grid(cfg, op.discrete.domain());

  std::string csv = "n,sup_error,theorem2_bound,specialized_bound\n";
  Json rows = Json::array();
  for (int n : cfg.n_list) {
    const double err = empirical_error(op, f, n, xs);
    double general = std::numeric_limits<double>::quiet_NaN();
    std::optional<double> special;
    if (f.modulus) {
      general = sup_over(xs, [&](double x) { return theorem2_bound(*f.modulus, op, n, x); });
      if (op.kind != PresetKind::custom) {
        special = sup_over(
            xs, [&](double x) { return specialized_bound(op.kind, *f.modulus, n, x); });
      }
    }
    csv += std::to_string(n) + ',' + format_double(err) + ',' +
           (std::isnan(general) ? std::string() : format_double(general)) + ',' +
           (special ? format_double(*special) : std::string()) + '\n';
    rows.push_back(Json{{"n", n},
                        {"sup_error", number_or_null(err)},
                        {"theorem2_bound", number_or_null(general)},
                        {"specialized_bound", special ? number_or_null(*special) : Json()}});
  }
  Output out;
  Json j{{"command", "converge"},
         {"preset", op.name},
         {"function", f.name},
         {"x", xs},
         {"rows", std::move(rows)}};
  out.text = want_json(cfg) ? dump(j) : csv;
  return out;
}

Output cmd_bounds(const RunConfig& cfg) {
  const auto op = require_operator(cfg);
  const int n = require_n(cfg);
  check_threshold(op, n);
  const auto f = require_function(cfg);
  if (!f.modulus) {
    throw ConfigError("function " + f.name + " carries no modulus of continuity");
  }
  const auto xs = make_grid(cfg, op.discrete.domain());
  const auto reports = bound_check(op, f, n, xs);

  Output out;
  Json list = Json::array();
  for (const auto& r : reports) {
    list.push_back(to_json(r));
    if (!r.dominated) {
      out.code = check_failed;
    }
  }
  Json j{{"command", "bounds"},
         {"preset", op.name},
         {"function", f.name},
         {"n", n},
         {"reports", std::move(list)}};
  out.text = want_json(cfg) ? dump(j) : bound_reports_csv(reports);
  return out;
}

Output cmd_check(const RunConfig& cfg) {
  const auto op = require_operator(cfg);
  const int n = require_n(cfg);
  check_threshold(op, n);
  if (cfg.format != "json" && cfg.format != "csv") {
    throw ConfigError("unknown format " + cfg.format);
  }
  if (cfg.samples <= 0) {
    throw ConfigError("--samples must be positive");
  }
  const double x = cfg.x.value_or(1.0);
  if (!op.discrete.domain().contains(x)) {
    throw ConfigError("x = " + format_double(x) + " leaves the domain " +
                      op.discrete.domain().to_string());
  }
  const auto samples = static_cast<std::size_t>(cfg.samples);
  bool all_pass = true;

  // Monte Carlo against the exact mean and second central moment.
  const RatPoly b = *op.discrete.covariance_poly();
  const auto mu = mu_moments(b, op.continuous.triple(), n, 2);
  const double alpha = mu.alpha.eval(x);
  const double mu2 = mu.entries[2].eval(x);
  const auto batch = oracle::sample_phillips(op, n, x, samples, cfg.seed);
  const auto est = oracle::estimate(batch.values);
  const double z_mean = (est.mean - alpha) / est.std_error;
  const double z_var = (est.variance - mu2) / est.variance_std_error;
  const bool mc_pass = std::abs(z_mean) <= 4.0 && std::abs(z_var) <= 4.0;
  all_pass = all_pass && mc_pass;
  Json mc{{"samples", samples},
          {"estimate", to_json(est)},
          {"alpha", number_or_null(alpha)},
          {"mu2", number_or_null(mu2)},
          {"z_mean", number_or_null(z_mean)},
          {"z_variance", number_or_null(z_var)},
          {"band", 4.0},
          {"pass", mc_pass}};

  // Discrete pmf against a chi-square test.
  const auto draws = oracle::sample_discrete(op.discrete, n, x, samples, cfg.seed + 1);
  const auto chi = oracle::chi_square_pmf(op.discrete, n, x, draws);
  const bool chi_pass = chi.statistic < chi.critical_999;
  all_pass = all_pass && chi_pass;
  Json pmf{{"statistic", number_or_null(chi.statistic)},
           {"dof", chi.dof},
           {"critical_999", number_or_null(chi.critical_999)},
           {"pass", chi_pass}};

  // Recurrence against direct summation of the discrete central moments.
  const Rational xq = from_double(x);
  const auto table = beta_moments(b, n, 4);
  Json brute = Json::array();
  for (int m = 0; m <= 4; ++m) {
    const auto r = oracle::brute_beta(op.discrete, n, m, xq);
    const Rational exact = moment_numeric(table, xq, m);
    const double diff = std::abs(to_double(Rational(r.value - exact)));
    const bool pass = r.exact ? r.value == exact
                              : diff <= 1e-12 * std::max(1.0, std::abs(to_double(exact)));
    all_pass = all_pass && pass;
    brute.push_back(Json{{"m", m},
                         {"recurrence", to_double(exact)},
                         {"direct", to_double(r.value)},
                         {"exact", r.exact},
                         {"abs_diff", diff},
                         {"tail_bound", r.tail_bound},
                         {"terms", r.terms},
                         {"pass", pass}});
  }

  // Masses of the six continuous structures and the printed constants.
  Json audit = Json::array();
  for (const auto& [an, ak] : std::vector<std::pair<int, long>>{{6, 0}, {6, 3}, {12, 5}}) {
    for (const auto& e : oracle::normalization_audit(an, ak)) {
      Json row = to_json(e);
      const bool variant = e.structure.find("variant") != std::string::npos;
      const bool pass = variant || std::abs(e.measured_mass - 1.0) <= 1e-8;
      row["pass"] = pass;
      all_pass = all_pass && pass;
      audit.push_back(std::move(row));
    }
  }

  Json j{{"command", "check"},
         {"preset", op.name},
         {"n", n},
         {"x", x},
         {"seed", cfg.seed},
         {"monte_carlo", std::move(mc)},
         {"discrete_pmf", std::move(pmf)},
         {"brute_beta", std::move(brute)},
         {"normalization_audit", std::move(audit)},
         {"pass", all_pass}};
  Output out;
  out.text = dump(j);
  out.code = all_pass ? ok : check_failed;
  return out;
}

Output dispatch(const RunConfig& cfg) {
  if (cfg.format != "csv" && cfg.format != "json") {
    throw ConfigError("--format must be csv or json");
  }
  if (cfg.command == "moments") {
    return cmd_moments(cfg);
  }
  if (cfg.command == "eval") {
    return cmd_eval(cfg);
  }
  if (cfg.command == "converge") {
    return cmd_converge(cfg);
  }
  if (cfg.command == "bounds") {
    return cmd_bounds(cfg);
  }
  return cmd_check(cfg);
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Moments, evaluations and error bounds of Phillips-type operators", "mixexp"};
  app.require_subcommand(1);
  app.set_config("--config", "", "key=value file; command-line flags take precedence");
  app.set_version_flag("--version", "mixexp 0.1.0");

  app.add_option("--preset", cfg.preset,
                 "phillips | bernstein_durrmeyer | szasz_baskakov | durrmeyer_beta");
  app.add_option("--family", cfg.family, "binomial | poisson | negative_binomial | catalan");
  app.add_option("--triple", cfg.triple, "a,b,c or beta | betaprime | gamma | invgamma | gauss | arctan");
  app.add_option("--n", cfg.n, "operator index");
  app.add_option("--n-list", cfg.n_list, "ascending indices, comma separated")->delimiter(',');
  app.add_option("--k", cfg.k, "index of the continuous kernel (moments of a triple)");
  app.add_option("--mmax", cfg.mmax, "highest moment order")->capture_default_str();
  app.add_option("--x-min", cfg.x_min, "grid start (default: left end of the domain)");
  app.add_option("--x-max", cfg.x_max, "grid end (default: 1 on [0,1], else 2)");
  app.add_option("--x-count", cfg.x_count, "grid size")->capture_default_str();
  app.add_option("--x", cfg.x, "evaluation point for check (default 1)");
  app.add_option("--function", cfg.function,
                 "one | t | t2 | t3 | sin | abs:c | clip:c:cap | poly:c0,c1,... | table:path");
  app.add_option("--format", cfg.format, "csv | json")->capture_default_str();
  app.add_option("--out", cfg.out, "output file (default: standard output)");
  app.add_option("--seed", cfg.seed, "random seed for check")->capture_default_str();
  app.add_option("--samples", cfg.samples, "Monte Carlo sample count for check")
      ->capture_default_str();

  const std::vector<std::pair<const char*, const char*>> commands = {
      {"moments", "central moment tables (beta, nu or mu)"},
      {"eval", "P_n(f, x) on a grid"},
      {"converge", "sup-grid error against n"},
      {"bounds", "pointwise error against the general and specialized bounds"},
      {"check", "Monte Carlo, brute-force and quadrature cross-checks (JSON)"}};
  for (const auto& [name, help] : commands) {
    app.add_subcommand(name, help)->fallthrough();
  }

  auto usage = [&app] {
    return app.get_formatter()->make_help(&app, "mixexp", CLI::AppFormatMode::Normal);
  };
  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << usage();
    return ok;
  } catch (const CLI::CallForVersion& e) {
    out << e.what() << '\n';
    return ok;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << usage();
    return config_error;
  }
  cfg.command = app.get_subcommands().front()->get_name();

  Output result;
  try {
    result = dispatch(cfg);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n\n" << usage();
    return config_error;
  } catch (const ParameterError& e) {
    err << "error: " << e.what() << '\n';
    return config_error;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return config_error;
  } catch (const UnknownPreset& e) {
    err << "error: " << e.what() << '\n';
    return config_error;
  } catch (const UnknownFamily& e) {
    err << "error: " << e.what() << '\n';
    return config_error;
  } catch (const InadmissibleTriple& e) {
    err << "error: " << e.what() << '\n';
    return config_error;
  } catch (const IndexError& e) {
    err << "error: " << e.what() << '\n';
    return config_error;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return compute_error;
  }

  if (cfg.out.empty()) {
    out << result.text;
  } else {
    std::ofstream file(cfg.out, std::ios::binary);
    if (!file) {
      err << "error: cannot open " << cfg.out << " for writing\n";
      return config_error;
    }
    file << result.text;
  }
  return result.code;
}

} // namespace mixexp::cli
