#include "wckp/check_report.hpp"

#include <limits>
#include <cmath>

#include "wckp/error.hpp"

namespace wckp {

std::string_view to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::Pass: return "pass";
    case CheckStatus::Fail: return "fail";
    case CheckStatus::Vacuous: return "vacuous";
    case CheckStatus::BugSuspected: return "bug_suspected";
  }
  return "fail";
}

CheckStatus check_status_from_string(std::string_view s) {
  if (s == "pass") return CheckStatus::Pass;
  if (s == "fail") return CheckStatus::Fail;
  if (s == "vacuous") return CheckStatus::Vacuous;
  if (s == "bug_suspected") return CheckStatus::BugSuspected;
  throw Error(ErrorCode::ParseError, "unknown check status '" + std::string(s) + "'");
}

CheckReport make_report(std::string check_id, double lhs, double rhs, double tolerance) {
  CheckReport r;
  r.check_id = std::move(check_id);
  r.lhs = lhs;
  r.rhs = rhs;
  r.margin = rhs - lhs;
  if (std::isinf(rhs) && rhs > 0.0) {
    r.status = CheckStatus::Vacuous;
  } else if (std::isnan(rhs) && !std::isnan(lhs)) {
    r.status = CheckStatus::Vacuous;
  } else {
    const double scale = std::max(1.0, std::abs(rhs));
    r.status = r.margin >= -tolerance * scale ? CheckStatus::Pass : CheckStatus::Fail;
  }
  return r;
}

CheckReport vacuous_report(std::string check_id, double lhs) {
  CheckReport r;
  r.check_id = std::move(check_id);
  r.lhs = lhs;
  r.rhs = std::numeric_limits<double>::infinity();
  r.margin = std::numeric_limits<double>::infinity();
  r.status = CheckStatus::Vacuous;
  return r;
}

}  // namespace wckp
