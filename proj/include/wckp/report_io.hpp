#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "wckp/check_report.hpp"

namespace wckp {

/// Infinite or NaN sides are written as null.
nlohmann::json report_to_json(const CheckReport& r);
/// Inverse of report_to_json; null sides come back as +∞ for vacuous reports
/// and NaN otherwise. Throws ParseError.
CheckReport report_from_json(const nlohmann::json& j);

nlohmann::json reports_to_json(const std::vector<CheckReport>& reports);
std::vector<CheckReport> reports_from_json(const nlohmann::json& j);

/// Columns check_id,lhs,rhs,margin,status,digest; numbers with 17 significant digits.
std::string reports_to_csv(const std::vector<CheckReport>& reports);

/// True if any report failed (fail or bug_suspected).
bool any_failure(const std::vector<CheckReport>& reports);

}  // namespace wckp
