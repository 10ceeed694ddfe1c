// wckp: command-line front end for the divergence / transport toolkit.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "wckp/checks.hpp"
#include "wckp/constants.hpp"
#include "wckp/divergences.hpp"
#include "wckp/error.hpp"
#include "wckp/instance.hpp"
#include "wckp/linearization.hpp"
#include "wckp/report_io.hpp"
#include "wckp/suite.hpp"
#include "wckp/transport.hpp"

using nlohmann::json;

namespace {

struct Globals {
  double tolerance_scale = 1.0;
  std::string format = "json";
  bool quiet = false;
};

wckp::Instance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw wckp::Error(wckp::ErrorCode::ConfigError, "cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw wckp::Error(wckp::ErrorCode::ParseError, path + ": " + e.what());
  }
  return wckp::instance_from_json(j);
}

template <class T>
const T& require(const std::optional<T>& v, const char* what) {
  if (!v) throw wckp::Error(wckp::ErrorCode::ConfigError, std::string("instance has no ") + what);
  return *v;
}

json nullable(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

// Flat objects print as key,value rows in CSV mode; nested values are dumped as JSON text.
void emit_object(const json& j, const Globals& g) {
  if (g.format == "csv") {
    std::cout << "key,value\n";
    for (const auto& [k, v] : j.items()) std::cout << k << ',' << (v.is_string() ? v.get<std::string>() : v.dump()) << '\n';
  } else {
    std::cout << j.dump(2) << '\n';
  }
}

void emit_reports(const std::vector<wckp::CheckReport>& reports, const std::string& out, const Globals& g) {
  const std::string text = g.format == "csv" ? wckp::reports_to_csv(reports) : wckp::reports_to_json(reports).dump(2) + "\n";
  if (out.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(out, std::ios::binary);
    if (!f) throw wckp::Error(wckp::ErrorCode::ConfigError, "cannot write " + out);
    f << text;
  }
  if (!g.quiet) {
    std::size_t pass = 0, fail = 0, vacuous = 0;
    for (const auto& r : reports) {
      switch (r.status) {
        case wckp::CheckStatus::Pass: ++pass; break;
        case wckp::CheckStatus::Vacuous: ++vacuous; break;
        default: ++fail; break;
      }
    }
    std::fprintf(stderr, "%zu reports: %zu pass, %zu vacuous, %zu fail\n", reports.size(), pass, vacuous, fail);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Divergence, linearization and transport-entropy checks on finite spaces"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--tolerance-scale", g.tolerance_scale, "Multiply every check tolerance")
      ->check(CLI::PositiveNumber);
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
  app.add_flag("--quiet", g.quiet, "No summary on stderr");

  std::string file;
  std::optional<double> alpha_opt;

  auto* div = app.add_subcommand("divergence", "KL, Renyi, Tsallis, Pearson-Vajda and TV of f");
  div->add_option("file", file, "Instance JSON")->required();
  div->add_option("--alpha", alpha_opt, "Order alpha (default: the instance's)");

  auto* dom = app.add_subcommand("dominate", "Domination certificate for g");
  dom->add_option("file", file, "Instance JSON")->required();
  dom->add_option("--alpha", alpha_opt, "Order alpha (default: the instance's)");
  bool with_oracle = false;
  dom->add_flag("--oracle", with_oracle, "Also run the projected-gradient oracle");

  auto* bk = app.add_subcommand("best-k", "Certified interval and search estimate for the best K");
  bk->add_option("file", file, "Instance JSON")->required();
  bk->add_option("--alpha", alpha_opt, "Order alpha (default: the instance's)");

  auto* ws = app.add_subcommand("wasserstein", "Exact W_p with dual certificate");
  ws->add_option("file", file, "Instance JSON")->required();
  std::optional<double> p_opt;
  ws->add_option("--p", p_opt, "Transport order (default: the instance's, else 1)");

  auto* suite = app.add_subcommand("suite", "Run registered checks over seeded instances");
  std::string seeds = "0..99";
  std::string out;
  wckp::SuiteConfig sc;
  suite->add_option("--seeds", seeds, "Seed range a..b or a count");
  suite->add_option("--n-max", sc.n_max, "Largest atom count");
  suite->add_option("--n-min", sc.n_min, "Smallest atom count");
  suite->add_option("--checks", sc.checks, "Check allowlist ('all' for every check)")->delimiter(',');
  suite->add_option("--alphas", sc.alphas, "Alpha grid")->delimiter(',');
  suite->add_option("--ps", sc.ps, "Transport-order grid")->delimiter(',');
  suite->add_option("--profiles", sc.profiles, "Generator profiles")->delimiter(',');
  suite->add_option("--jobs", sc.jobs, "Worker threads");
  suite->add_option("--out", out, "Report file (default: stdout)");

  auto* search = app.add_subcommand("search", "Hill-climb for the smallest margin of one check");
  wckp::SearchConfig sr;
  search->add_option("--check", sr.check_id, "Check id")->required();
  search->add_option("--seed", sr.seed, "Starting seed");
  search->add_option("--n", sr.n, "Atom count");
  search->add_option("--iters", sr.iterations, "Mutation steps");
  search->add_option("--alpha", sr.alpha, "Order alpha");
  search->add_option("--p", sr.p, "Transport order");
  search->add_option("--profile", sr.profile, "Generator profile for the start instance");
  search->add_option("--out", out, "Report file (default: stdout)");

  auto* list = app.add_subcommand("checks", "List registered checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*div) {
      wckp::Instance inst = load_instance(file);
      const auto order = wckp::make_order(alpha_opt.value_or(inst.alpha));
      const auto& f = require(inst.f, "density f");
      json j;
      j["alpha"] = order.alpha;
      j["kl"] = wckp::kl(inst.space, f);
      j["renyi"] = wckp::renyi(inst.space, f, order);
      j["tsallis"] = wckp::tsallis(inst.space, f, order);
      j["pearson_vajda"] = wckp::pearson_vajda(inst.space, f, order);
      j["total_variation"] = wckp::total_variation(inst.space, f);
      if (inst.w) j["weighted_tv"] = wckp::weighted_tv(inst.space, f, *inst.w);
      emit_object(j, g);
      return 0;
    }
    if (*dom) {
      wckp::Instance inst = load_instance(file);
      const auto order = wckp::make_order(alpha_opt.value_or(inst.alpha));
      const auto& gf = require(inst.g, "function g");
      const auto cert = wckp::dominated(inst.space, gf, order);
      json j;
      j["alpha"] = order.alpha;
      j["c"] = cert.c;
      j["lhs"] = nullable(cert.lhs_42);
      j["rhs"] = nullable(cert.rhs_42);
      j["margin"] = cert.margin;
      j["dominated"] = cert.dominated;
      j["max_r"] = cert.r_at_extremizer;
      j["normalization_error"] = cert.normalization_error;
      j["extremizer"] = std::vector<double>(cert.extremizer.values().begin(), cert.extremizer.values().end());
      j["sufficient_condition"] = wckp::sufficient_condition(inst.space, gf, order);
      if (with_oracle) {
        const auto o = wckp::maximize_r(inst.space, gf, order);
        j["oracle_max_r"] = o.value;
        j["oracle_iterations"] = o.iterations;
      }
      emit_object(j, g);
      return 0;
    }
    if (*bk) {
      wckp::Instance inst = load_instance(file);
      const auto order = wckp::make_order(alpha_opt.value_or(inst.alpha));
      const auto u = wckp::center(inst.space, require(inst.u, "function u"));
      const auto k = wckp::best_k_interval(inst.space, u, order);
      json j;
      j["alpha"] = order.alpha;
      j["lower"] = k.lower;
      j["upper"] = k.upper;
      j["estimate"] = k.k_empirical;
      emit_object(j, g);
      return 0;
    }
    if (*ws) {
      wckp::Instance inst = load_instance(file);
      const double p = p_opt.value_or(inst.p.value_or(1.0));
      const auto& ms = require(inst.metric, "distance matrix");
      const auto& f = require(inst.f, "density f");
      const auto r = wckp::wasserstein(ms, f, p);
      const auto cert = wckp::verify_duals(ms, f, p, r);
      json j;
      j["p"] = p;
      j["value"] = r.value;
      j["cost"] = r.plan.cost;
      j["dual_value"] = cert.dual_value;
      j["max_dual_violation"] = cert.max_violation;
      j["max_cs_gap"] = cert.max_cs_gap;
      if (g.format == "json") {
        j["plan"] = r.plan.pi;
        j["row_potential"] = r.row_potential;
        j["col_potential"] = r.col_potential;
      }
      emit_object(j, g);
      return 0;
    }
    if (*suite) {
      std::tie(sc.seed_first, sc.seed_last) = wckp::parse_seed_range(seeds);
      sc.tolerance_scale = g.tolerance_scale;
      const auto reports = wckp::run_suite(sc);
      emit_reports(reports, out, g);
      return wckp::any_failure(reports) ? 1 : 0;
    }
    if (*search) {
      sr.tolerance_scale = g.tolerance_scale;
      const auto reports = wckp::search_counterexamples(sr);
      emit_reports(reports, out, g);
      return wckp::any_failure(reports) ? 1 : 0;
    }
    if (*list) {
      for (const auto& c : wckp::registered_checks()) {
        std::cout << c.id << "\ttol=" << c.tolerance << "\t" << c.description << '\n';
      }
      return 0;
    }
  } catch (const wckp::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    // Solver breakdowns are failures of the run; everything else is bad input.
    switch (e.code()) {
      case wckp::ErrorCode::NoConvergence:
      case wckp::ErrorCode::OracleNotConverged:
      case wckp::ErrorCode::SolverFailure:
        return 1;
      default:
        return 2;
    }
  }
  return 2;
}
