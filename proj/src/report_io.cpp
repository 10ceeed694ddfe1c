#include "wckp/report_io.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include "wckp/error.hpp"

namespace wckp {

namespace {

using nlohmann::json;

json number_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

double read_side(const json& j, const char* key, CheckStatus status) {
  const json& v = j.at(key);
  if (v.is_null()) {
    return status == CheckStatus::Vacuous ? std::numeric_limits<double>::infinity()
                                          : std::numeric_limits<double>::quiet_NaN();
  }
  if (!v.is_number()) throw Error(ErrorCode::ParseError, std::string(key) + " must be a number or null");
  return v.get<double>();
}

std::string csv_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

json report_to_json(const CheckReport& r) {
  json j;
  j["check_id"] = r.check_id;
  j["lhs"] = number_or_null(r.lhs);
  j["rhs"] = number_or_null(r.rhs);
  j["margin"] = number_or_null(r.margin);
  j["status"] = std::string(to_string(r.status));
  j["instance_digest"] = r.instance_digest;
  j["seed"] = r.seed;
  j["alpha"] = r.alpha;
  if (r.note) j["note"] = *r.note;
  if (r.instance) j["instance"] = *r.instance;
  return j;
}

CheckReport report_from_json(const json& j) {
  try {
    CheckReport r;
    r.check_id = j.at("check_id").get<std::string>();
    r.status = check_status_from_string(j.at("status").get<std::string>());
    r.lhs = read_side(j, "lhs", r.status);
    r.rhs = read_side(j, "rhs", r.status);
    r.margin = read_side(j, "margin", r.status);
    r.instance_digest = j.value("instance_digest", std::string());
    r.seed = j.value("seed", std::uint64_t{0});
    r.alpha = j.value("alpha", 0.0);
    if (j.contains("note")) r.note = j.at("note").get<std::string>();
    if (j.contains("instance")) r.instance = j.at("instance");
    return r;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("bad report: ") + e.what());
  }
}

json reports_to_json(const std::vector<CheckReport>& reports) {
  json a = json::array();
  for (const auto& r : reports) a.push_back(report_to_json(r));
  return a;
}

std::vector<CheckReport> reports_from_json(const json& j) {
  if (!j.is_array()) throw Error(ErrorCode::ParseError, "report file must hold an array");
  std::vector<CheckReport> out;
  for (const auto& x : j) out.push_back(report_from_json(x));
  return out;
}

std::string reports_to_csv(const std::vector<CheckReport>& reports) {
  std::string out = "check_id,lhs,rhs,margin,status,digest\n";
  for (const auto& r : reports) {
    out += r.check_id + ',' + csv_number(r.lhs) + ',' + csv_number(r.rhs) + ',' + csv_number(r.margin) + ',' +
           std::string(to_string(r.status)) + ',' + r.instance_digest + '\n';
  }
  return out;
}

bool any_failure(const std::vector<CheckReport>& reports) {
  for (const auto& r : reports) {
    if (r.status == CheckStatus::Fail || r.status == CheckStatus::BugSuspected) return true;
  }
  return false;
}

}  // namespace wckp
