#include "wckp/suite.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <limits>
#include <optional>
#include <thread>

#include "wckp/checks.hpp"
#include "wckp/error.hpp"
#include "wckp/rng.hpp"

namespace wckp {

namespace {

std::uint64_t parse_u64(std::string_view s) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    throw Error(ErrorCode::ConfigError, "bad seed '" + std::string(s) + "'");
  }
  return v;
}

std::uint64_t mix(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

bool is_transport_check(const std::string& id) {
  return id == "eq_3_5" || id.rfind("cor_3_", 0) == 0;
}

double relative_margin(const CheckReport& r) {
  if (r.status == CheckStatus::Vacuous || std::isnan(r.margin)) return std::numeric_limits<double>::infinity();
  // Slack relative to the bound itself, so the climb cannot win by shrinking
  // both sides towards zero.
  return std::abs(r.rhs) > 0.0 ? r.margin / std::abs(r.rhs) : r.margin;
}

// Raw copy of an instance that can be perturbed freely and rebuilt through the
// validating constructors.
struct Draft {
  std::vector<double> mu, nu, g, u, w;
  std::vector<std::vector<double>> dist;
  std::size_t base = 0;
  bool has_f = false, has_g = false, has_u = false, has_w = false, has_metric = false;
  double alpha = 2.0;
  std::optional<double> p;
  std::uint64_t seed = 0;

  explicit Draft(const Instance& inst)
      : mu(inst.space.weights().begin(), inst.space.weights().end()), alpha(inst.alpha), p(inst.p),
        seed(inst.seed) {
    if (inst.f) {
      has_f = true;
      nu = inst.f->masses(inst.space);
    }
    auto copy = [](const std::optional<RealFunction>& src, std::vector<double>& dst, bool& flag) {
      if (!src) return;
      flag = true;
      dst.assign(src->values().begin(), src->values().end());
    };
    copy(inst.g, g, has_g);
    copy(inst.u, u, has_u);
    copy(inst.w, w, has_w);
    if (inst.metric) {
      has_metric = true;
      dist = inst.metric->distances();
      base = inst.metric->base_index();
    }
  }

  Instance build() const {
    const auto normalize = [](std::vector<double> v) {
      double s = 0.0;
      for (double x : v) s += x;
      for (double& x : v) x /= s;
      return v;
    };
    Instance inst(make_space(normalize(mu)));
    if (has_f) inst.f = density_from_masses(inst.space, normalize(nu));
    if (has_g) inst.g = RealFunction(g);
    if (has_u) inst.u = RealFunction(u);
    if (has_w) inst.w = RealFunction(w);
    if (has_metric) inst.metric = make_metric_space(inst.space, dist, base);
    inst.alpha = alpha;
    inst.p = p;
    inst.seed = seed;
    return inst;
  }
};

double spread(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return std::max(m, 1e-3);
}

void mutate(Draft& d, Rng& rng, double sigma) {
  std::vector<int> fields{0};
  if (d.has_f) fields.push_back(1);
  if (d.has_g) fields.push_back(2);
  if (d.has_u) fields.push_back(3);
  if (d.has_w) fields.push_back(4);
  if (d.has_metric) fields.push_back(5);
  const int field = fields[rng.index(fields.size())];
  const std::size_t n = d.mu.size();
  switch (field) {
    case 0:
      for (double& x : d.mu) x *= std::exp(sigma * rng.normal());
      break;
    case 1:
      for (double& x : d.nu) {
        x *= std::exp(sigma * rng.normal());
        if (rng.uniform() < 0.02) x = 0.0;
      }
      if (std::all_of(d.nu.begin(), d.nu.end(), [](double x) { return x == 0.0; })) d.nu[rng.index(n)] = 1.0;
      break;
    case 2: {
      const double s = spread(d.g);
      for (double& x : d.g) x += sigma * s * rng.normal();
      break;
    }
    case 3: {
      const double s = spread(d.u);
      for (double& x : d.u) x += sigma * s * rng.normal();
      break;
    }
    case 4: {
      const double s = spread(d.w);
      for (double& x : d.w) x = std::abs(x + sigma * s * rng.normal());
      break;
    }
    case 5:
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < i; ++j) d.dist[i][j] = d.dist[j][i] = d.dist[i][j] * std::exp(sigma * rng.normal());
      }
      d.dist = shortest_path_closure(std::move(d.dist));
      break;
  }
}

}  // namespace

std::pair<std::uint64_t, std::uint64_t> parse_seed_range(const std::string& text) {
  const auto dots = text.find("..");
  if (dots == std::string::npos) {
    const std::uint64_t count = parse_u64(text);
    if (count == 0) throw Error(ErrorCode::ConfigError, "seed count must be positive");
    return {0, count - 1};
  }
  const std::uint64_t a = parse_u64(std::string_view(text).substr(0, dots));
  const std::uint64_t b = parse_u64(std::string_view(text).substr(dots + 2));
  if (b < a) throw Error(ErrorCode::ConfigError, "empty seed range '" + text + "'");
  return {a, b};
}

Instance suite_instance(const SuiteConfig& config, std::uint64_t seed) {
  const std::size_t np = config.profiles.size();
  const std::size_t na = config.alphas.size();
  const std::size_t span = config.n_max - config.n_min + 1;
  const std::size_t n = config.n_min + static_cast<std::size_t>(mix(seed) % span);
  const std::string& profile = config.profiles[seed % np];
  const double alpha = config.alphas[(seed / np) % na];
  Instance inst = generate(seed, n, profile, alpha);
  if (inst.metric) inst.p = config.ps[(seed / (np * na)) % config.ps.size()];
  return inst;
}

std::vector<CheckReport> run_suite(const SuiteConfig& config) {
  const auto ids = resolve_check_ids(config.checks);
  if (config.alphas.empty() || config.ps.empty() || config.profiles.empty()) {
    throw Error(ErrorCode::ConfigError, "alpha, p and profile grids must be nonempty");
  }
  if (config.n_min < 1 || config.n_max < config.n_min) throw Error(ErrorCode::ConfigError, "bad atom-count range");
  if (config.seed_last < config.seed_first) throw Error(ErrorCode::ConfigError, "empty seed range");
  for (double a : config.alphas) make_order(a);
  for (double p : config.ps) {
    if (!(p >= 1.0)) throw Error(ErrorCode::ConfigError, "transport order must be >= 1");
  }
  for (const auto& prof : config.profiles) {
    const auto& names = profile_names();
    if (std::find(names.begin(), names.end(), prof) == names.end()) {
      throw Error(ErrorCode::UnknownProfile, "no profile named '" + prof + "'");
    }
  }

  const std::uint64_t count = config.seed_last - config.seed_first + 1;
  std::vector<std::vector<CheckReport>> per_seed(count);
  std::atomic<std::uint64_t> next{0};
  auto worker = [&] {
    for (std::uint64_t k = next++; k < count; k = next++) {
      const Instance inst = suite_instance(config, config.seed_first + k);
      per_seed[k] = evaluate_checks(inst, ids, config.tolerance_scale);
    }
  };
  const unsigned jobs = std::max(1u, std::min<unsigned>(config.jobs, static_cast<unsigned>(count)));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  std::vector<CheckReport> out;
  for (auto& v : per_seed) {
    for (auto& r : v) out.push_back(std::move(r));
  }
  std::stable_sort(out.begin(), out.end(), [&](const CheckReport& a, const CheckReport& b) {
    if (a.check_id != b.check_id) return a.check_id < b.check_id;
    return a.seed < b.seed;
  });
  return out;
}

std::vector<CheckReport> search_counterexamples(const SearchConfig& config) {
  const auto ids = resolve_check_ids({config.check_id});
  if (ids.size() != 1) throw Error(ErrorCode::ConfigError, "search needs exactly one check");
  if (config.n < 1) throw Error(ErrorCode::ConfigError, "search needs at least one atom");
  if (config.iterations < 0) throw Error(ErrorCode::ConfigError, "iteration count must be nonnegative");
  const std::string profile =
      !config.profile.empty() ? config.profile : (is_transport_check(ids[0]) ? "euclidean" : "dirichlet");

  Instance start = generate(config.seed, config.n, profile, config.alpha);
  if (start.metric) start.p = config.p;
  auto score = [&](const Instance& inst, CheckReport& out) {
    const auto reports = evaluate_checks(inst, ids, config.tolerance_scale);
    if (reports.empty()) throw Error(ErrorCode::ConfigError, "profile '" + profile + "' lacks inputs for " + ids[0]);
    out = reports.front();
    return relative_margin(out);
  };

  CheckReport best_report;
  Draft best(start);
  double best_score = score(start, best_report);
  Instance best_instance = start;

  Rng rng(config.seed ^ 0x5EA2C4ULL);
  double sigma = 0.3;
  for (int it = 0; it < config.iterations; ++it) {
    Draft trial = best;
    mutate(trial, rng, sigma);
    CheckReport rep;
    double s;
    try {
      const Instance inst = trial.build();
      s = score(inst, rep);
      if (s < best_score) {
        best = std::move(trial);
        best_score = s;
        best_report = std::move(rep);
        best_instance = inst;
        sigma = std::min(1.0, sigma * 1.5);
        continue;
      }
    } catch (const Error&) {
      // invalid perturbation (e.g. a weight underflowed); just try again
    }
    sigma = std::max(1e-6, sigma * 0.95);
  }

  best_report.instance = instance_to_json(best_instance);
  if (best_report.status == CheckStatus::Fail) best_report.status = CheckStatus::BugSuspected;
  if (!best_report.note) best_report.note = "smallest margin found";
  return {best_report};
}

}  // namespace wckp
