#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "wckp/measure.hpp"
#include "wckp/transport.hpp"

namespace wckp {

/// One test case: the space plus whichever functions the checks need.
/// Absent optional members simply switch off the checks that depend on them.
struct Instance {
  explicit Instance(Space s) : space(std::move(s)) {}

  Space space;
  std::optional<MetricSpace> metric;
  std::optional<Density> f;
  std::optional<RealFunction> g;
  std::optional<RealFunction> u;
  std::optional<RealFunction> w;
  double alpha = 2.0;
  std::optional<double> p;
  std::uint64_t seed = 0;
};

/// Schema: {"mu": [...], "f": [...], "g": [...], "u": [...], "w": [...],
///          "dist": [[...]], "base": 0, "alpha": 2.0, "p": 1.0, "seed": 0}
/// Only "mu" is required. Throws ParseError plus whatever the validators throw.
Instance instance_from_json(const nlohmann::json& j);
nlohmann::json instance_to_json(const Instance& inst);

/// FNV-1a 64 of the canonical JSON text, as 16 hex digits.
std::string instance_digest(const Instance& inst);

/// Seeded generator. Profiles: "dirichlet", "sparse", "near-mu", "euclidean",
/// "graph". Identical (seed, n, profile, alpha) give bit-identical instances.
/// Throws UnknownProfile.
Instance generate(std::uint64_t seed, std::size_t n, const std::string& profile, double alpha = 2.0);

const std::vector<std::string>& profile_names();

}  // namespace wckp
