#include "mixexp/serialize.hpp"

#include <cmath>
#include <cstdio>

namespace mixexp {

std::string format_double(double v) {
  if (std::isnan(v)) {
    return "nan";
  }
  if (std::isinf(v)) {
    return v > 0 ? "inf" : "-inf";
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Json number_or_null(double v) {
  if (!std::isfinite(v)) {
    return nullptr;
  }
  return v;
}

Json poly_to_json(const RatPoly& p) {
  Json coeffs = Json::array();
  for (const auto& c : p.coefficients()) {
    coeffs.push_back(to_string(c));
  }
  return Json{{"polynomial", to_string(p)}, {"coefficients", std::move(coeffs)}};
}

Json to_json(const MomentTableB& t, const std::string& family) {
  Json entries = Json::array();
  for (std::size_t m = 0; m < t.entries.size(); ++m) {
    Json e = poly_to_json(t.entries[m]);
    e["m"] = m;
    entries.push_back(std::move(e));
  }
  return Json{{"kind", "beta"},
              {"family", family},
              {"n", t.n},
              {"covariance", to_string(t.covariance)},
              {"moments", std::move(entries)}};
}

Json to_json(const MomentTableH& t) {
  Json entries = Json::array();
  for (std::size_t m = 0; m < t.entries.size(); ++m) {
    entries.push_back(Json{{"m", m}, {"value", to_string(t.entries[m])}});
  }
  return Json{{"kind", "nu"},
              {"triple", t.triple.to_string()},
              {"n", t.n},
              {"k", t.k},
              {"alpha1", to_string(t.alpha1)},
              {"moments", std::move(entries)}};
}

Json to_json(const MomentTablePhillips& t, const std::string& preset) {
  Json entries = Json::array();
  for (std::size_t m = 0; m < t.entries.size(); ++m) {
    Json e = poly_to_json(t.entries[m]);
    e["m"] = m;
    entries.push_back(std::move(e));
  }
  return Json{{"kind", "mu"},
              {"preset", preset},
              {"triple", t.triple.to_string()},
              {"n", t.n},
              {"covariance", to_string(t.covariance)},
              {"alpha", to_string(t.alpha)},
              {"moments", std::move(entries)}};
}

Json to_json(const BoundReport& r) {
  return Json{{"n", r.n},
              {"x", r.x},
              {"general_bound", number_or_null(r.general_bound)},
              {"specialized_bound",
               r.specialized_bound ? number_or_null(*r.specialized_bound) : Json(nullptr)},
              {"empirical_error", number_or_null(r.empirical_error)},
              {"dominated", r.dominated}};
}

std::string bound_reports_csv(const std::vector<BoundReport>& reports) {
  std::string out = "n,x,general_bound,specialized_bound,empirical_error,dominated\n";
  for (const auto& r : reports) {
    out += std::to_string(r.n);
    out += ',' + format_double(r.x);
    out += ',' + format_double(r.general_bound);
    out += ',' + (r.specialized_bound ? format_double(*r.specialized_bound) : std::string());
    out += ',' + format_double(r.empirical_error);
    out += r.dominated ? ",true\n" : ",false\n";
  }
  return out;
}

Json to_json(const oracle::McEstimate& e) {
  return Json{{"mean", number_or_null(e.mean)},
              {"variance", number_or_null(e.variance)},
              {"std_error", number_or_null(e.std_error)},
              {"variance_std_error", number_or_null(e.variance_std_error)}};
}

Json to_json(const oracle::NormalizationAuditEntry& e) {
  Json partial = Json::array();
  for (double v : e.printed_partial_masses) {
    partial.push_back(number_or_null(v));
  }
  return Json{{"structure", e.structure},
              {"triple", e.triple},
              {"n", e.n},
              {"k", e.k},
              {"measured_mass", number_or_null(e.measured_mass)},
              {"printed_formula", e.printed_formula},
              {"printed_mass_analytic", number_or_null(e.printed_mass_analytic)},
              {"printed_mass_measured", number_or_null(e.printed_mass_measured)},
              {"printed_partial_masses", std::move(partial)},
              {"printed_consistent", e.printed_consistent},
              {"note", e.note}};
}

} // namespace mixexp
