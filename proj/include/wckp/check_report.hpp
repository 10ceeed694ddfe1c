#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "json.hpp"

namespace wckp {

enum class CheckStatus { Pass, Fail, Vacuous, BugSuspected };

std::string_view to_string(CheckStatus s);
CheckStatus check_status_from_string(std::string_view s);

/// One evaluated inequality lhs ≤ rhs on one instance. margin = rhs − lhs.
struct CheckReport {
  std::string check_id;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;
  CheckStatus status = CheckStatus::Pass;
  std::string instance_digest;
  std::uint64_t seed = 0;
  double alpha = 0.0;
  std::optional<nlohmann::json> instance;  // embedded for failures so they can be replayed
  std::optional<std::string> note;         // e.g. "derived constant", or the error behind a failure
};

/// Status for lhs ≤ rhs: vacuous when rhs is +∞ (or NaN from an infinite factor),
/// pass when margin ≥ −tolerance·max(1, |rhs|).
CheckReport make_report(std::string check_id, double lhs, double rhs, double tolerance);

/// A report for an implication whose premise failed on this instance.
CheckReport vacuous_report(std::string check_id, double lhs);

}  // namespace wckp
