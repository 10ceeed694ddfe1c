#include "wckp/instance.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "wckp/error.hpp"
#include "wckp/rng.hpp"

namespace wckp {

namespace {

using nlohmann::json;

std::vector<double> read_vector(const json& j, const char* key) {
  const json& v = j.at(key);
  if (!v.is_array()) throw Error(ErrorCode::ParseError, std::string(key) + " must be an array");
  std::vector<double> out;
  out.reserve(v.size());
  for (const auto& x : v) {
    if (!x.is_number()) throw Error(ErrorCode::ParseError, std::string(key) + " must hold numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

std::vector<double> normalized_exponentials(Rng& rng, std::size_t n) {
  std::vector<double> w(n);
  double s = 0.0;
  for (double& x : w) {
    x = rng.exponential() + 1e-3;  // keep atoms away from zero mass
    s += x;
  }
  for (double& x : w) x /= s;
  return w;
}

std::vector<double> masses_to_density(const std::vector<double>& mu, std::vector<double> nu) {
  double s = 0.0;
  for (double x : nu) s += x;
  for (std::size_t i = 0; i < nu.size(); ++i) nu[i] = nu[i] / s / mu[i];
  return nu;
}

std::uint64_t profile_salt(const std::string& profile) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : profile) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace

const std::vector<std::string>& profile_names() {
  static const std::vector<std::string> names{"dirichlet", "sparse", "near-mu", "euclidean", "graph"};
  return names;
}

Instance instance_from_json(const json& j) {
  if (!j.is_object()) throw Error(ErrorCode::ParseError, "instance must be a JSON object");
  if (!j.contains("mu")) throw Error(ErrorCode::ParseError, "instance needs \"mu\"");
  Instance inst(make_space(read_vector(j, "mu")));
  if (j.contains("f")) inst.f = make_density(inst.space, read_vector(j, "f"));
  auto read_function = [&](const char* key, std::optional<RealFunction>& slot) {
    if (!j.contains(key)) return;
    auto v = read_vector(j, key);
    if (v.size() != inst.space.size()) throw Error(ErrorCode::SizeMismatch, std::string(key) + " has wrong length");
    slot = RealFunction(std::move(v));
  };
  read_function("g", inst.g);
  read_function("u", inst.u);
  read_function("w", inst.w);
  if (j.contains("dist")) {
    std::vector<std::vector<double>> dist;
    const json& d = j.at("dist");
    if (!d.is_array()) throw Error(ErrorCode::ParseError, "dist must be a matrix");
    for (const auto& row : d) {
      if (!row.is_array()) throw Error(ErrorCode::ParseError, "dist must be a matrix");
      std::vector<double> r;
      for (const auto& x : row) {
        if (!x.is_number()) throw Error(ErrorCode::ParseError, "dist must hold numbers");
        r.push_back(x.get<double>());
      }
      dist.push_back(std::move(r));
    }
    const std::size_t base = j.value("base", std::size_t{0});
    inst.metric = make_metric_space(inst.space, std::move(dist), base);
  }
  if (j.contains("alpha")) {
    if (!j.at("alpha").is_number()) throw Error(ErrorCode::ParseError, "alpha must be a number");
    inst.alpha = j.at("alpha").get<double>();
  }
  make_order(inst.alpha);
  if (j.contains("p")) {
    if (!j.at("p").is_number()) throw Error(ErrorCode::ParseError, "p must be a number");
    inst.p = j.at("p").get<double>();
    if (!(*inst.p >= 1.0)) throw Error(ErrorCode::BadExponent, "p must be >= 1");
  }
  if (j.contains("seed")) inst.seed = j.at("seed").get<std::uint64_t>();
  return inst;
}

json instance_to_json(const Instance& inst) {
  json j;
  j["mu"] = std::vector<double>(inst.space.weights().begin(), inst.space.weights().end());
  if (inst.f) j["f"] = std::vector<double>(inst.f->values().begin(), inst.f->values().end());
  if (inst.g) j["g"] = std::vector<double>(inst.g->values().begin(), inst.g->values().end());
  if (inst.u) j["u"] = std::vector<double>(inst.u->values().begin(), inst.u->values().end());
  if (inst.w) j["w"] = std::vector<double>(inst.w->values().begin(), inst.w->values().end());
  if (inst.metric) {
    j["dist"] = inst.metric->distances();
    j["base"] = inst.metric->base_index();
  }
  j["alpha"] = inst.alpha;
  if (inst.p) j["p"] = *inst.p;
  j["seed"] = inst.seed;
  return j;
}

std::string instance_digest(const Instance& inst) {
  const std::string text = instance_to_json(inst).dump();
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Instance generate(std::uint64_t seed, std::size_t n, const std::string& profile, double alpha) {
  if (n < 1) throw Error(ErrorCode::ConfigError, "instance needs at least one atom");
  const auto& names = profile_names();
  if (std::find(names.begin(), names.end(), profile) == names.end()) {
    throw Error(ErrorCode::UnknownProfile, "no profile named '" + profile + "'");
  }
  Rng rng(seed ^ profile_salt(profile));
  const std::vector<double> mu = normalized_exponentials(rng, n);

  std::vector<double> f;
  if (profile == "sparse") {
    // ν lives on a few atoms; large T_α.
    const std::size_t support = 1 + rng.index(std::max<std::size_t>(1, n / 3));
    std::vector<double> nu(n, 0.0);
    for (std::size_t k = 0; k < support; ++k) nu[rng.index(n)] += rng.exponential() + 1e-3;
    f = masses_to_density(mu, nu);
  } else if (profile == "near-mu") {
    // f = 1 + εh with ‖εh‖_∞ ≤ 0.1.
    std::vector<double> h(n);
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      h[i] = rng.normal();
      m += mu[i] * h[i];
    }
    double top = 0.0;
    for (double& x : h) {
      x -= m;
      top = std::max(top, std::abs(x));
    }
    const double eps = 0.1 * rng.uniform(0.01, 1.0);
    f.resize(n);
    for (std::size_t i = 0; i < n; ++i) f[i] = 1.0 + (top > 0.0 ? eps * h[i] / top : 0.0);
  } else {
    f = masses_to_density(mu, normalized_exponentials(rng, n));
  }

  const double scale_u = std::exp(rng.normal());
  std::vector<double> u(n), w(n), g(n);
  for (std::size_t i = 0; i < n; ++i) u[i] = scale_u * rng.normal();
  if (profile == "sparse" && n > 1) u[rng.index(n)] *= 6.0;  // one heavy atom

  const double scale_w = std::exp(0.5 * rng.normal());
  for (std::size_t i = 0; i < n; ++i) w[i] = scale_w * std::abs(rng.normal());

  // Centered fluctuation plus a negative shift, so domination holds on roughly
  // half of the instances.
  const double scale_g = std::exp(0.7 * rng.normal());
  double gm = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    g[i] = scale_g * rng.normal();
    gm += mu[i] * g[i];
  }
  double var = 0.0;
  for (std::size_t i = 0; i < n; ++i) var += mu[i] * (g[i] - gm) * (g[i] - gm);
  // Near μ the threshold for domination sits at a shift of about var/(2α).
  const double shift = rng.uniform(0.0, 2.0) * var / (2.0 * alpha);
  for (double& x : g) x -= gm + shift;

  Instance inst(make_space(mu));
  inst.f = make_density(inst.space, f);
  inst.g = RealFunction(std::move(g));
  inst.u = RealFunction(std::move(u));
  inst.w = RealFunction(std::move(w));
  inst.alpha = alpha;
  make_order(alpha);
  inst.seed = seed;

  if (profile == "euclidean") {
    std::vector<std::pair<double, double>> pts(n);
    for (auto& pt : pts) pt = {rng.uniform(), rng.uniform()};
    std::vector<std::vector<double>> d(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        d[i][j] = std::hypot(pts[i].first - pts[j].first, pts[i].second - pts[j].second);
      }
    }
    inst.metric = make_metric_space(inst.space, std::move(d), rng.index(n));
    inst.p = 1.0;
  } else if (profile == "graph") {
    std::vector<std::vector<double>> d(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < i; ++j) d[i][j] = d[j][i] = rng.uniform(0.1, 1.0);
    }
    inst.metric = make_metric_space(inst.space, shortest_path_closure(std::move(d)), rng.index(n));
    inst.p = 1.0;
  }
  return inst;
}

}  // namespace wckp
