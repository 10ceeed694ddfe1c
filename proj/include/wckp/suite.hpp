#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "wckp/check_report.hpp"
#include "wckp/instance.hpp"

namespace wckp {

struct SuiteConfig {
  std::uint64_t seed_first = 0;
  std::uint64_t seed_last = 99;  // inclusive
  std::size_t n_min = 2;
  std::size_t n_max = 12;
  std::vector<double> alphas{1.2, 1.5, 2.0, 3.0, 6.0};
  std::vector<double> ps{1.0, 2.0};
  std::vector<std::string> checks{"all"};
  std::vector<std::string> profiles{"dirichlet", "sparse", "near-mu", "euclidean", "graph"};
  double tolerance_scale = 1.0;
  unsigned jobs = 1;
};

/// "a..b" (inclusive) or a count "N" meaning 0..N−1. ConfigError otherwise.
std::pair<std::uint64_t, std::uint64_t> parse_seed_range(const std::string& text);

/// The instance the suite evaluates for `seed`: profile, α and p cycle through
/// the config grids, the atom count is drawn from [n_min, n_max].
Instance suite_instance(const SuiteConfig& config, std::uint64_t seed);

/// One report per (check, instance), sorted by check id then seed regardless
/// of `jobs`. Throws ConfigError for an empty allowlist or grid, bad ranges.
std::vector<CheckReport> run_suite(const SuiteConfig& config);

struct SearchConfig {
  std::string check_id;
  std::uint64_t seed = 1;
  std::size_t n = 2;
  int iterations = 2000;
  double alpha = 2.0;
  double p = 1.0;
  std::string profile;  // empty: "euclidean" for transport checks, "dirichlet" otherwise
  double tolerance_scale = 1.0;
};

/// Hill-climbs the relative margin of one check over perturbed instances and
/// returns the report of the tightest instance found, instance embedded. A
/// failing report is relabelled bug_suspected: every registered check is a
/// proved inequality. Throws ConfigError.
std::vector<CheckReport> search_counterexamples(const SearchConfig& config);

}  // namespace wckp
