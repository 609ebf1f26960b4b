#pragma once

#include "mixexp/bounds.hpp"
#include "mixexp/moments.hpp"
#include "mixexp/oracle.hpp"

#include <nlohmann/json.hpp>

#include <string>
#include <vector>

namespace mixexp {

using Json = nlohmann::ordered_json;

/// %.17g; "nan", "inf", "-inf" for non-finite values.
std::string format_double(double v);

/// Finite doubles as numbers, non-finite ones as null.
Json number_or_null(double v);

/// Coefficients are ascending "p/q" strings; `polynomial` is the rendered
/// form.
Json poly_to_json(const RatPoly& p);

Json to_json(const MomentTableB& t, const std::string& family);
Json to_json(const MomentTableH& t);
Json to_json(const MomentTablePhillips& t, const std::string& preset);

Json to_json(const BoundReport& r);
std::string bound_reports_csv(const std::vector<BoundReport>& reports);

Json to_json(const oracle::McEstimate& e);
Json to_json(const oracle::NormalizationAuditEntry& e);

} // namespace mixexp
