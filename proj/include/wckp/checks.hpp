#pragma once
// Registry of inequality checks. Each check reads what it needs from an
// Instance (f, g, u, w, metric) and yields lhs ≤ rhs reports; checks whose
// inputs are absent produce nothing.

#include <string>
#include <vector>

#include "wckp/check_report.hpp"
#include "wckp/instance.hpp"

namespace wckp {

struct CheckInfo {
  std::string id;
  std::string description;
  double tolerance;  // relative: pass iff margin ≥ −tolerance·max(1, |rhs|)
};

const std::vector<CheckInfo>& registered_checks();
const CheckInfo& find_check(const std::string& id);  // ConfigError for unknown ids

/// Expands "all" and the "pinsker" alias, drops duplicates, keeps registry
/// order. ConfigError for an empty list or unknown ids.
std::vector<std::string> resolve_check_ids(const std::vector<std::string>& requested);

/// Runs the given checks on one instance. Reports carry the digest, seed and
/// alpha; failures embed the instance. Numerical errors inside a check turn
/// into a failing report with NaN sides and the error in `note`.
std::vector<CheckReport> evaluate_checks(const Instance& inst, const std::vector<std::string>& ids,
                                         double tolerance_scale = 1.0);

/// Re-evaluates a report from its embedded instance (ParseError if none).
CheckReport replay(const CheckReport& report, double tolerance_scale = 1.0);

}  // namespace wckp
