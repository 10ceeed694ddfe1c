#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <vector>

#include "wckp/checks.hpp"
#include "wckp/error.hpp"
#include "wckp/instance.hpp"
#include "wckp/report_io.hpp"
#include "wckp/suite.hpp"

using namespace wckp;
using nlohmann::json;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::SolverFailure;
}

Instance pinsker_instance() {
  return instance_from_json(json::parse(R"({"mu": [0.5, 0.5], "f": [1.5, 0.5], "alpha": 2.0})"));
}

}  // namespace

TEST(Generate, Deterministic) {
  for (const auto& profile : profile_names()) {
    for (std::uint64_t seed : {0u, 1u, 99u}) {
      const Instance a = generate(seed, 7, profile, 3.0);
      const Instance b = generate(seed, 7, profile, 3.0);
      EXPECT_EQ(instance_to_json(a).dump(), instance_to_json(b).dump());
      EXPECT_EQ(instance_digest(a), instance_digest(b));
      EXPECT_EQ(instance_digest(a).size(), 16u);
    }
  }
  EXPECT_NE(instance_digest(generate(1, 5, "dirichlet")), instance_digest(generate(2, 5, "dirichlet")));
}

TEST(Generate, ProfileContracts) {
  const Instance near = generate(1, 2, "near-mu");
  for (double x : near.f->values()) EXPECT_LE(std::abs(x - 1.0), 0.1 + 1e-12);
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const Instance e = generate(seed, 2 + seed % 10, "near-mu");
    for (double x : e.f->values()) EXPECT_LE(std::abs(x - 1.0), 0.1 + 1e-12);
  }
  const Instance eu = generate(2, 5, "euclidean");
  ASSERT_TRUE(eu.metric.has_value());
  const auto& d = eu.metric->distances();
  for (std::size_t i = 0; i < 5; ++i) {
    for (std::size_t j = 0; j < 5; ++j) {
      for (std::size_t k = 0; k < 5; ++k) EXPECT_LE(d[i][k], d[i][j] + d[j][k] + 1e-9);
    }
  }
  EXPECT_TRUE(generate(3, 6, "graph").metric.has_value());
  EXPECT_FALSE(generate(3, 6, "dirichlet").metric.has_value());
  EXPECT_EQ(code_of([] { generate(1, 3, "cauchy"); }), ErrorCode::UnknownProfile);
  EXPECT_EQ(code_of([] { generate(1, 0, "dirichlet"); }), ErrorCode::ConfigError);
}

TEST(Generate, SparseConcentratesMass) {
  int big = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const Instance inst = generate(seed, 12, "sparse");
    const auto z = std::count(inst.f->values().begin(), inst.f->values().end(), 0.0);
    if (z >= 8) ++big;
  }
  EXPECT_GT(big, 25);
}

TEST(InstanceJson, RoundTripPreservesDigest) {
  for (const auto& profile : profile_names()) {
    const Instance a = generate(5, 9, profile, 1.5);
    const Instance b = instance_from_json(json::parse(instance_to_json(a).dump()));
    EXPECT_EQ(instance_digest(a), instance_digest(b)) << profile;
  }
}

TEST(InstanceJson, Validation) {
  EXPECT_EQ(code_of([] { instance_from_json(json::parse(R"({"f": [1]})")); }), ErrorCode::ParseError);
  EXPECT_EQ(code_of([] { instance_from_json(json::parse(R"([1, 2])")); }), ErrorCode::ParseError);
  EXPECT_EQ(code_of([] { instance_from_json(json::parse(R"({"mu": [0.5, "x"]})")); }), ErrorCode::ParseError);
  EXPECT_EQ(code_of([] { instance_from_json(json::parse(R"({"mu": [0.5, 0.5], "f": [1.5, 1.5]})")); }),
            ErrorCode::BadNormalization);
  EXPECT_EQ(code_of([] { instance_from_json(json::parse(R"({"mu": [0.5, 0.5], "g": [1]})")); }),
            ErrorCode::SizeMismatch);
  EXPECT_EQ(code_of([] { instance_from_json(json::parse(R"({"mu": [0.5, 0.5], "alpha": 1.0})")); }),
            ErrorCode::BadOrder);
  EXPECT_EQ(code_of([] { instance_from_json(json::parse(R"({"mu": [0.5, 0.5], "p": 0.5})")); }),
            ErrorCode::BadExponent);
  EXPECT_EQ(code_of([] {
              instance_from_json(json::parse(R"({"mu": [0.5, 0.5], "dist": [[0, 1], [2, 0]]})"));
            }),
            ErrorCode::BadMetric);
}

TEST(Registry, CoversEveryInequality) {
  const std::vector<std::string> expected{
      "eq_1_1", "eq_1_2", "eq_1_3", "eq_2_1", "chi_T_identity_alpha2", "thm_2_1", "thm_2_2", "eq_2_6",
      "eq_2_8", "thm_2_3", "thm_2_3_lower", "cor_2_4", "cor_9_2", "lemma_9_1", "lemma_10_1", "eq_11_2",
      "eq_11_3", "eq_11_4", "eq_11_4_upper", "prop_11_2", "eq_4_3", "thm_4_1", "thm_4_2", "eq_5_1",
      "eq_5_1_norm", "prop_6_1", "prop_6_1_lower", "eq_7_2", "prop_8_1_mean", "eq_8_2", "eq_8_3", "prop_8_2",
      "prop_8_2_lower", "eq_8_6_8_7", "eq_3_5", "cor_3_1a", "cor_3_1b", "cor_3_2"};
  std::vector<std::string> got;
  for (const auto& c : registered_checks()) {
    got.push_back(c.id);
    EXPECT_FALSE(c.description.empty()) << c.id;
    EXPECT_TRUE(c.tolerance == 1e-12 || c.tolerance == 1e-10 || c.tolerance == 1e-9 || c.tolerance == 1e-8 ||
                c.tolerance == 1e-6)
        << c.id;
  }
  EXPECT_EQ(got, expected);
  EXPECT_EQ(resolve_check_ids({"all"}), expected);
}

TEST(Registry, Resolution) {
  EXPECT_EQ(resolve_check_ids({"pinsker"}), std::vector<std::string>{"eq_1_1"});
  EXPECT_EQ(resolve_check_ids({"cor_3_2", "eq_1_1", "cor_3_2"}), (std::vector<std::string>{"eq_1_1", "cor_3_2"}));
  EXPECT_EQ(code_of([] { resolve_check_ids({}); }), ErrorCode::ConfigError);
  EXPECT_EQ(code_of([] { resolve_check_ids({"no_such_check"}); }), ErrorCode::ConfigError);
  EXPECT_EQ(code_of([] { find_check("nope"); }), ErrorCode::ConfigError);
}

TEST(Checks, PinskerExample) {
  const auto reports = evaluate_checks(pinsker_instance(), resolve_check_ids({"pinsker"}));
  ASSERT_EQ(reports.size(), 1u);
  EXPECT_NEAR(reports[0].lhs, 0.5, 1e-12);
  EXPECT_NEAR(reports[0].rhs, std::sqrt(2 * (0.75 * std::log(1.5) + 0.25 * std::log(0.5))), 1e-15);
  EXPECT_NEAR(reports[0].rhs, 0.5115, 1e-4);
  EXPECT_EQ(reports[0].status, CheckStatus::Pass);
}

TEST(Checks, ChiTsallisIdentityHasZeroMargin) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto r = evaluate_checks(generate(seed, 2 + seed % 11, profile_names()[seed % 5]), {"chi_T_identity_alpha2"});
    ASSERT_EQ(r.size(), 1u);
    EXPECT_LE(std::abs(r[0].margin), 1e-12 * std::max(1.0, std::abs(r[0].rhs)));
    EXPECT_EQ(r[0].status, CheckStatus::Pass);
  }
}

TEST(Checks, MissingInputsProduceNoReports) {
  const Instance bare = instance_from_json(json::parse(R"({"mu": [0.25, 0.75]})"));
  EXPECT_TRUE(evaluate_checks(bare, resolve_check_ids({"all"})).empty());
  const auto only_f = evaluate_checks(pinsker_instance(), resolve_check_ids({"all"}));
  for (const auto& r : only_f) EXPECT_NE(r.check_id, "eq_3_5");
  EXPECT_FALSE(only_f.empty());
}

TEST(Checks, ReportsCarryInstanceMetadata) {
  const Instance inst = generate(4, 6, "euclidean", 3.0);
  for (const auto& r : evaluate_checks(inst, resolve_check_ids({"all"}))) {
    EXPECT_EQ(r.instance_digest, instance_digest(inst));
    EXPECT_EQ(r.seed, 4u);
    EXPECT_EQ(r.alpha, 3.0);
    EXPECT_EQ(r.margin, r.status == CheckStatus::Vacuous ? r.margin : r.rhs - r.lhs);
  }
}

TEST(Checks, StoredOneWayWitness) {
  // g = (1,−1) on two equal atoms, α = 2: the necessary condition holds while
  // domination fails, so the sign check sees a positive maximum of R.
  const Instance inst =
      instance_from_json(json::parse(R"({"mu": [0.5, 0.5], "g": [1, -1], "alpha": 2.0})"));
  const auto reports = evaluate_checks(inst, resolve_check_ids({"all"}));
  bool saw_necessary = false, saw_sign = false;
  for (const auto& r : reports) {
    EXPECT_NE(r.status, CheckStatus::Fail) << r.check_id;
    if (r.check_id == "eq_8_2") {
      saw_necessary = true;
      EXPECT_EQ(r.status, CheckStatus::Vacuous);  // premise (domination) fails
    }
    if (r.check_id == "thm_4_1") {
      saw_sign = true;
      EXPECT_EQ(r.status, CheckStatus::Pass);
      EXPECT_NEAR(r.lhs, 0.0, 1e-12);
      EXPECT_NEAR(r.rhs, 0.25, 1e-9);
    }
  }
  EXPECT_TRUE(saw_necessary);
  EXPECT_TRUE(saw_sign);
}

TEST(Checks, ToleranceScaleLoosensStatus) {
  CheckReport tight = make_report("x", 1.0 + 5e-10, 1.0, 1e-10);
  EXPECT_EQ(tight.status, CheckStatus::Fail);
  CheckReport loose = make_report("x", 1.0 + 5e-10, 1.0, 1e-9);
  EXPECT_EQ(loose.status, CheckStatus::Pass);
  EXPECT_EQ(make_report("x", 1.0, INFINITY, 1e-9).status, CheckStatus::Vacuous);
  EXPECT_EQ(vacuous_report("x", 3.0).status, CheckStatus::Vacuous);
}

TEST(Replay, FailuresReproduceTheirMargin) {
  // Shrink tolerances to nothing so near-equality cases fail and embed their instance.
  SuiteConfig cfg;
  cfg.seed_last = 49;
  cfg.tolerance_scale = 1e-30;
  int replayed = 0;
  for (const auto& r : run_suite(cfg)) {
    if (r.status != CheckStatus::Fail) continue;
    ASSERT_TRUE(r.instance.has_value()) << r.check_id;
    const CheckReport again = replay(r, cfg.tolerance_scale);
    EXPECT_EQ(again.check_id, r.check_id);
    if (std::isfinite(r.margin)) {
      EXPECT_NEAR(again.margin, r.margin, 1e-12 * std::max(1.0, std::abs(r.margin))) << r.check_id;
    }
    ++replayed;
  }
  EXPECT_GT(replayed, 0);
  CheckReport plain;
  EXPECT_EQ(code_of([&] { replay(plain); }), ErrorCode::ParseError);
}

TEST(Suite, DefaultConfigAllGreen) {
  SuiteConfig cfg;
  cfg.seed_last = 199;
  const auto reports = run_suite(cfg);
  EXPECT_FALSE(any_failure(reports));
  for (const auto& r : reports) EXPECT_NE(r.status, CheckStatus::Fail) << r.check_id << " seed " << r.seed;
}

TEST(Suite, SortedAndIndependentOfThreadCount) {
  SuiteConfig cfg;
  cfg.seed_last = 39;
  const auto one = run_suite(cfg);
  cfg.jobs = 4;
  const auto four = run_suite(cfg);
  EXPECT_EQ(reports_to_json(one).dump(), reports_to_json(four).dump());
  EXPECT_TRUE(std::is_sorted(one.begin(), one.end(), [](const CheckReport& a, const CheckReport& b) {
    return a.check_id != b.check_id ? a.check_id < b.check_id : a.seed < b.seed;
  }));
}

TEST(Suite, ConfigErrors) {
  SuiteConfig cfg;
  cfg.checks = {};
  EXPECT_EQ(code_of([&] { run_suite(cfg); }), ErrorCode::ConfigError);
  cfg = SuiteConfig{};
  cfg.alphas = {};
  EXPECT_EQ(code_of([&] { run_suite(cfg); }), ErrorCode::ConfigError);
  cfg = SuiteConfig{};
  cfg.n_min = 5;
  cfg.n_max = 4;
  EXPECT_EQ(code_of([&] { run_suite(cfg); }), ErrorCode::ConfigError);
  cfg = SuiteConfig{};
  cfg.ps = {0.5};
  EXPECT_EQ(code_of([&] { run_suite(cfg); }), ErrorCode::ConfigError);
  cfg = SuiteConfig{};
  cfg.alphas = {0.9};
  EXPECT_EQ(code_of([&] { run_suite(cfg); }), ErrorCode::BadOrder);
}

TEST(Suite, SeedRanges) {
  EXPECT_EQ(parse_seed_range("0..99"), (std::pair<std::uint64_t, std::uint64_t>{0, 99}));
  EXPECT_EQ(parse_seed_range("7..7"), (std::pair<std::uint64_t, std::uint64_t>{7, 7}));
  EXPECT_EQ(parse_seed_range("500"), (std::pair<std::uint64_t, std::uint64_t>{0, 499}));
  for (const char* bad : {"", "9..3", "a..b", "0", "1..", "-3"}) {
    EXPECT_EQ(code_of([&] { parse_seed_range(bad); }), ErrorCode::ConfigError) << bad;
  }
}

TEST(Suite, InstanceGridCyclesThroughConfig) {
  SuiteConfig cfg;
  std::set<std::string> digests;
  std::set<double> alphas;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const Instance inst = suite_instance(cfg, seed);
    EXPECT_GE(inst.space.size(), cfg.n_min);
    EXPECT_LE(inst.space.size(), cfg.n_max);
    alphas.insert(inst.alpha);
    digests.insert(instance_digest(inst));
    EXPECT_EQ(inst.metric.has_value(), inst.p.has_value());
  }
  EXPECT_EQ(alphas.size(), cfg.alphas.size());
  EXPECT_EQ(digests.size(), 50u);
}

TEST(ReportIo, JsonRoundTrip) {
  SuiteConfig cfg;
  cfg.seed_last = 9;
  const auto reports = run_suite(cfg);
  const json j = reports_to_json(reports);
  const auto back = reports_from_json(json::parse(j.dump()));
  ASSERT_EQ(back.size(), reports.size());
  EXPECT_EQ(reports_to_json(back).dump(), j.dump());
  EXPECT_EQ(code_of([] { report_from_json(json::parse(R"({"lhs": 1})")); }), ErrorCode::ParseError);
}

TEST(ReportIo, NonFiniteSidesBecomeNull) {
  CheckReport v = vacuous_report("x", 1.0);
  const json j = report_to_json(v);
  EXPECT_TRUE(j.at("rhs").is_null());
  const CheckReport back = report_from_json(j);
  EXPECT_EQ(back.status, CheckStatus::Vacuous);
  EXPECT_TRUE(std::isinf(back.rhs));
}

TEST(ReportIo, CsvProjection) {
  const auto reports = evaluate_checks(pinsker_instance(), {"eq_1_1", "chi_T_identity_alpha2"});
  const std::string csv = reports_to_csv(reports);
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "check_id,lhs,rhs,margin,status,digest");
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    EXPECT_EQ(std::count(line.begin(), line.end(), ','), 5);
  }
  EXPECT_EQ(rows, 2);
  EXPECT_NE(csv.find("eq_1_1,0.5,"), std::string::npos);
}

TEST(Search, TransportBoundTightOnTwoPoints) {
  SearchConfig cfg;
  cfg.check_id = "eq_3_5";
  cfg.n = 2;
  cfg.iterations = 300;
  const auto out = search_counterexamples(cfg);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_NE(out[0].status, CheckStatus::BugSuspected);
  EXPECT_LE(out[0].margin, 1e-9 * std::max(1.0, out[0].rhs));
  EXPECT_TRUE(out[0].instance.has_value());
}

TEST(Search, ReportsSmallestMarginAndDigest) {
  SearchConfig cfg;
  cfg.check_id = "thm_2_1";
  cfg.n = 3;
  cfg.iterations = 200;
  const auto out = search_counterexamples(cfg);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0].check_id, "thm_2_1");
  EXPECT_EQ(out[0].instance_digest.size(), 16u);
  EXPECT_NE(out[0].status, CheckStatus::BugSuspected);
  // The start instance is never better than the result.
  SearchConfig none = cfg;
  none.iterations = 0;
  const auto start = search_counterexamples(none);
  EXPECT_LE(out[0].margin / std::abs(out[0].rhs), start[0].margin / std::abs(start[0].rhs) + 1e-15);
}

TEST(Search, IdentityStaysAtZero) {
  SearchConfig cfg;
  cfg.check_id = "chi_T_identity_alpha2";
  cfg.n = 4;
  cfg.iterations = 100;
  const auto out = search_counterexamples(cfg);
  EXPECT_LE(std::abs(out[0].margin), 1e-12 * std::max(1.0, std::abs(out[0].rhs)));
  EXPECT_EQ(out[0].status, CheckStatus::Pass);
}

TEST(Search, ConfigErrors) {
  SearchConfig cfg;
  EXPECT_EQ(code_of([&] { search_counterexamples(cfg); }), ErrorCode::ConfigError);
  cfg.check_id = "all";
  EXPECT_EQ(code_of([&] { search_counterexamples(cfg); }), ErrorCode::ConfigError);
  cfg.check_id = "eq_3_5";
  cfg.profile = "dirichlet";  // no metric, so the check never runs
  EXPECT_EQ(code_of([&] { search_counterexamples(cfg); }), ErrorCode::ConfigError);
}
