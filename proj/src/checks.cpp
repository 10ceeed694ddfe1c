#include "wckp/checks.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>

#include "wckp/constants.hpp"
#include "wckp/divergences.hpp"
#include "wckp/error.hpp"
#include "wckp/linearization.hpp"

namespace wckp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

constexpr double kClosedForm = 1e-9;
constexpr double kOracle = 1e-6;
constexpr double kInterval = 1e-8;
constexpr double kGrid = 1e-10;
constexpr int kKGridPoints = 10000;
constexpr int kThm42GridPoints = 1000;

// Everything a check may need from one instance, computed on first use.
class Analysis {
 public:
  explicit Analysis(const Instance& inst) : inst(inst), order(make_order(inst.alpha)) {}

  const Instance& inst;
  const Order order;

  const Space& space() const { return inst.space; }
  const Density& f() const { return *inst.f; }
  const RealFunction& g() const { return *inst.g; }
  const RealFunction& u() const { return *inst.u; }
  const RealFunction& w() const { return *inst.w; }
  double p() const { return inst.p.value_or(1.0); }

  double kl() { return cached(kl_, [&] { return wckp::kl(space(), f()); }); }
  double tsallis() { return cached(tsallis_, [&] { return wckp::tsallis(space(), f(), order); }); }
  double renyi() { return cached(renyi_, [&] { return wckp::renyi(space(), f(), order); }); }
  double chi() { return cached(chi_, [&] { return pearson_vajda(space(), f(), order); }); }
  double weighted_tv() { return cached(wtv_, [&] { return wckp::weighted_tv(space(), f(), w()); }); }

  // |∫u dν − ∫u dμ| = |∫u(f−1) dμ|, evaluated on the deviation to avoid cancellation.
  double u_deviation() {
    return cached(udev_, [&] {
      return std::abs(space().integrate_by([&](std::size_t i) { return u()[i] * (f()[i] - 1.0); }));
    });
  }

  const RealFunction& centered_u() {
    if (!centered_u_) centered_u_ = center(space(), u());
    return *centered_u_;
  }
  const KInterval& k_interval() {
    if (!k_interval_) k_interval_ = best_k_interval(space(), centered_u(), order);
    return *k_interval_;
  }
  const DominationCertificate& certificate() {
    if (!cert_) cert_ = dominated(space(), g(), order);
    return *cert_;
  }
  const OracleResult& oracle() {
    if (!oracle_) oracle_ = maximize_r(space(), g(), order);
    return *oracle_;
  }
  const std::vector<CheckReport>& corollaries() {
    if (!corollaries_) corollaries_ = check_corollaries_3(*inst.metric, f(), order, p());
    return *corollaries_;
  }
  const NecessaryConditions& necessary() {
    if (!necessary_) necessary_ = necessary_conditions(space(), g(), order);
    return *necessary_;
  }

 private:
  template <class Fn>
  static double cached(std::optional<double>& slot, Fn&& fn) {
    if (!slot) slot = fn();
    return *slot;
  }

  std::optional<double> kl_, tsallis_, renyi_, chi_, wtv_, udev_;
  std::optional<RealFunction> centered_u_;
  std::optional<KInterval> k_interval_;
  std::optional<DominationCertificate> cert_;
  std::optional<OracleResult> oracle_;
  std::optional<NecessaryConditions> necessary_;
  std::optional<std::vector<CheckReport>> corollaries_;
};

struct Outcome {
  double lhs = 0.0;
  double rhs = 0.0;
  bool vacuous = false;
  std::optional<std::string> note;
};

Outcome bound(double lhs, double rhs) { return {lhs, rhs, false, std::nullopt}; }
Outcome premise_fails(double lhs) { return {lhs, kInf, true, std::nullopt}; }

enum Needs : unsigned { kF = 1, kG = 2, kU = 4, kW = 8, kMetric = 16 };

struct Definition {
  CheckInfo info;
  unsigned needs;
  std::function<Outcome(Analysis&)> run;
};

bool has_inputs(const Instance& inst, unsigned needs) {
  if ((needs & kF) && !inst.f) return false;
  if ((needs & kG) && !inst.g) return false;
  if ((needs & kU) && !inst.u) return false;
  if ((needs & kW) && !inst.w) return false;
  if ((needs & kMetric) && !inst.metric) return false;
  return true;
}

// Grid version of K_p: the sup over r restricted to k·max|u|/N, k = 1..N.
double k_p_on_grid(const Space& space, const RealFunction& u, double p) {
  double top = 0.0;
  for (double x : u.values()) top = std::max(top, std::abs(x));
  if (top == 0.0) return 0.0;
  double best = 0.0;
  for (int k = 1; k <= kKGridPoints; ++k) {
    const double r = top * k / kKGridPoints;
    best = std::max(best, truncated_moment(space, u, p, r));
  }
  return std::pow(best, 1.0 / (2.0 * p - 2.0));
}

RealFunction absolute(const RealFunction& g) {
  std::vector<double> v(g.values().begin(), g.values().end());
  for (double& x : v) x = std::abs(x);
  return RealFunction(std::move(v));
}

const std::vector<Definition>& definitions() {
  static const std::vector<Definition> defs = [] {
    std::vector<Definition> d;
    auto add = [&](std::string id, std::string description, double tol, unsigned needs,
                   std::function<Outcome(Analysis&)> run) {
      d.push_back({{std::move(id), std::move(description), tol}, needs, std::move(run)});
    };

    // ---- divergences and weighted total variation --------------------------------
    add("eq_1_1", "Pinsker: TV <= sqrt(2 KL)", kClosedForm, kF, [](Analysis& a) {
      return bound(total_variation(a.space(), a.f()), std::sqrt(2.0 * a.kl()));
    });
    add("eq_1_2", "weighted TV <= sqrt(1 + log E e^{w^2}) sqrt(2 KL)", kClosedForm, kF | kW, [](Analysis& a) {
      std::vector<double> w2(a.w().values().begin(), a.w().values().end());
      for (double& x : w2) x *= x;
      const double factor = 1.0 + log_mean_exp(a.space(), w2);
      return bound(a.weighted_tv(), std::sqrt(factor) * std::sqrt(2.0 * a.kl()));
    });
    add("eq_1_3", "weighted TV <= (3/2 + log E e^{2w}) (sqrt KL + KL/2)", kClosedForm, kF | kW,
        [](Analysis& a) {
          std::vector<double> w2(a.w().values().begin(), a.w().values().end());
          for (double& x : w2) x *= 2.0;
          const double factor = 1.5 + log_mean_exp(a.space(), w2);
          return bound(a.weighted_tv(), factor * (std::sqrt(a.kl()) + 0.5 * a.kl()));
        });
    add("eq_2_1", "Renyi divergence <= Tsallis distance", kClosedForm, kF, [](Analysis& a) {
      return bound(a.renyi(), a.tsallis());
    });
    add("chi_T_identity_alpha2", "chi_2 = T_2 (relative difference)", 1e-12, kF, [](Analysis& a) {
      const Order two = make_order(2.0);
      const double chi2 = pearson_vajda(a.space(), a.f(), two);
      const double t2 = wckp::tsallis(a.space(), a.f(), two);
      return bound(std::abs(chi2 - t2) / std::max(1.0, t2), 0.0);
    });
    add("thm_2_1", "weighted TV <= ||w||_beta x (16/3 max(T^1/2, T^1/alpha) | 3^alpha T^1/alpha)", kClosedForm,
        kF | kW, [](Analysis& a) {
          const double t = a.tsallis();
          const double alpha = a.order.alpha;
          const double wn = lp_norm(a.space(), a.w(), a.order.beta);
          double rhs = kInf;
          if (alpha <= 2.0) rhs = 16.0 / 3.0 * wn * std::max(std::sqrt(t), std::pow(t, 1.0 / alpha));
          if (alpha >= 2.0) rhs = std::min(rhs, std::pow(3.0, alpha) * wn * std::pow(t, 1.0 / alpha));
          return bound(a.weighted_tv(), rhs);
        });
    add("thm_2_2", "weighted TV <= C ||w||_{2beta*-2} sqrt(T)", kClosedForm, kF | kW, [](Analysis& a) {
      const double beta = a.order.beta;
      const double c = a.order.alpha >= 2.0 ? 2.0 : 4.0 * std::pow(beta, beta);
      const double wn = lp_norm(a.space(), a.w(), 2.0 * a.order.beta_star - 2.0);
      return bound(a.weighted_tv(), c * wn * std::sqrt(a.tsallis()));
    });
    add("eq_2_6", "K_p on a 10^4-point r-grid <= K_p from the atom values (p = beta*)", kGrid, kU,
        [](Analysis& a) {
          const double p = a.order.beta_star;
          return bound(k_p_on_grid(a.space(), a.centered_u(), p), k_p(a.space(), a.centered_u(), p));
        });
    add("eq_2_8", "K_p(u) <= ||u||_{2p-2} (p = beta*)", kGrid, kU, [](Analysis& a) {
      const double p = a.order.beta_star;
      return bound(k_p(a.space(), a.centered_u(), p), lp_norm(a.space(), a.centered_u(), 2.0 * p - 2.0));
    });
    add("thm_2_3", "searched best K <= upper end of the certified interval", kInterval, kU, [](Analysis& a) {
      return bound(a.k_interval().k_empirical, a.k_interval().upper);
    });
    add("thm_2_3_lower", "lower end of the certified interval <= searched best K", kInterval, kU,
        [](Analysis& a) { return bound(a.k_interval().lower, a.k_interval().k_empirical); });
    add("cor_2_4", "|int u dnu| <= C ||u||_{2beta*-2} sqrt(T), u centered", kClosedForm, kF | kU,
        [](Analysis& a) {
          const double beta = a.order.beta;
          const double c = a.order.alpha >= 2.0 ? 1.0 : 2.0 * std::pow(beta, beta);
          const double un = lp_norm(a.space(), a.centered_u(), 2.0 * a.order.beta_star - 2.0);
          return bound(a.u_deviation(), c * un * std::sqrt(a.tsallis()));
        });
    add("cor_9_2", "alpha >= 2: searched best K <= ||u||_2", kInterval, kU, [](Analysis& a) {
      const double est = a.k_interval().k_empirical;
      if (a.order.alpha < 2.0) return premise_fails(est);
      return bound(est, lp_norm(a.space(), a.centered_u(), 2.0));
    });
    add("lemma_9_1", "||u||_2^2 <= K^2 alpha/2 for the certified K", kInterval, kU, [](Analysis& a) {
      const double un = lp_norm(a.space(), a.centered_u(), 2.0);
      const double k = a.k_interval().upper;
      return bound(un * un, k * k * a.order.alpha / 2.0);
    });
    add("lemma_10_1", "tilts (4/K) lambda u - 4 lambda^2 are dominated for the certified K", kClosedForm, kU,
        [](Analysis& a) {
          const double k = a.k_interval().upper;
          const auto& u = a.centered_u();
          if (k == 0.0) return bound(0.0, 0.0);
          double worst = -kInf;
          std::vector<double> g(u.size());
          for (int e = -6; e <= 6; ++e) {
            for (double sign : {1.0, -1.0}) {
              const double lam = sign * std::ldexp(1.0, e);
              for (std::size_t i = 0; i < g.size(); ++i) g[i] = 4.0 / k * lam * u[i] - 4.0 * lam * lam;
              worst = std::max(worst, dominated(a.space(), RealFunction(g), a.order).r_at_extremizer);
            }
          }
          return bound(worst, 0.0);
        });
    add("eq_11_2", "|int u dnu - int u dmu| <= C ||u||_{2beta*-2} sqrt(T)", kClosedForm, kF | kU,
        [](Analysis& a) {
          const double beta = a.order.beta;
          const double c = a.order.alpha >= 2.0 ? 2.0 : 4.0 * std::pow(beta, beta);
          const double un = lp_norm(a.space(), a.u(), 2.0 * a.order.beta_star - 2.0);
          return bound(a.u_deviation(), c * un * std::sqrt(a.tsallis()));
        });
    add("eq_11_3", "|int u dnu - int u dmu| <= ||u||_beta chi_alpha^{1/alpha}", kClosedForm, kF | kU,
        [](Analysis& a) {
          const double un = lp_norm(a.space(), a.u(), a.order.beta);
          return bound(a.u_deviation(), un * std::pow(a.chi(), 1.0 / a.order.alpha));
        });
    add("eq_11_4", "T >= 3/16 min(chi, chi^{2/alpha}) | alpha 3^-alpha chi", kClosedForm, kF, [](Analysis& a) {
      const double chi = a.chi();
      const double alpha = a.order.alpha;
      double lower = 0.0;
      if (alpha <= 2.0) lower = 3.0 / 16.0 * std::min(chi, std::pow(chi, 2.0 / alpha));
      if (alpha >= 2.0) lower = std::max(lower, alpha * std::pow(3.0, -alpha) * chi);
      return bound(lower, a.tsallis());
    });
    add("eq_11_4_upper", "T <= ((1 + chi^{1/alpha})^alpha - 1)/(alpha - 1)", kClosedForm, kF, [](Analysis& a) {
      const double alpha = a.order.alpha;
      const double root = std::pow(a.chi(), 1.0 / alpha);
      return bound(a.tsallis(), std::expm1(alpha * std::log1p(root)) / (alpha - 1.0));
    });
    add("prop_11_2", "|int u dnu - int u dmu| <= ||u||_beta x (16/3 max(T^1/2, T^1/alpha) | 3^alpha/alpha T^1/alpha)",
        kClosedForm, kF | kU, [](Analysis& a) {
          const double t = a.tsallis();
          const double alpha = a.order.alpha;
          const double un = lp_norm(a.space(), a.u(), a.order.beta);
          double rhs = kInf;
          if (alpha <= 2.0) rhs = 16.0 / 3.0 * un * std::max(std::sqrt(t), std::pow(t, 1.0 / alpha));
          if (alpha >= 2.0) rhs = std::min(rhs, std::pow(3.0, alpha) / alpha * un * std::pow(t, 1.0 / alpha));
          return bound(a.u_deviation(), rhs);
        });

    // ---- linearization --------------------------------------------------------------
    add("eq_4_3", "root equation residual at the computed c", kClosedForm, kG, [](Analysis& a) {
      return bound(a.certificate().root_residual, 0.0);
    });
    add("thm_4_1", "sign of max R (oracle) agrees with the closed-form domination test", kOracle, kG,
        [](Analysis& a) {
          const double m = a.oracle().value;
          return a.certificate().dominated ? bound(m, 0.0) : bound(0.0, m);
        });
    add("thm_4_2", "the domination inequality at some c' on a grid implies domination", kClosedForm, kG,
        [](Analysis& a) {
          const auto vals = a.g().values();
          const double lo = *std::min_element(vals.begin(), vals.end()) - 3.0 * a.order.beta;
          const double hi = *std::max_element(vals.begin(), vals.end());
          bool witness = false;
          for (int k = 0; k <= kThm42GridPoints && !witness; ++k) {
            const double c = lo + (hi - lo) * k / kThm42GridPoints;
            witness = domination_gap_at(a.space(), a.g(), a.order, c) <= 0.0;
          }
          const double r = a.certificate().r_at_extremizer;
          return witness ? bound(r, 0.0) : premise_fails(r);
        });
    add("eq_5_1", "R at the explicit extremizer matches the oracle maximum", kOracle, kG, [](Analysis& a) {
      const double r = r_functional(a.space(), a.g(), a.order, a.certificate().extremizer);
      return bound(std::abs(r - a.oracle().value), 0.0);
    });
    add("eq_5_1_norm", "explicit extremizer integrates to one", kClosedForm, kG, [](Analysis& a) {
      return bound(a.certificate().normalization_error, 0.0);
    });
    add("prop_6_1", "best constant in int fg <= K int f^alpha (g -> |g|) is <= ||g||_beta", kOracle, kG,
        [](Analysis& a) {
          const auto q = q_constant_bounds(a.space(), absolute(a.g()), a.order);
          return bound(q.k_est, q.upper);
        });
    add("prop_6_1_lower", "||g||_beta/(e alpha) <= best constant in int fg <= K int f^alpha (g -> |g|)", kOracle,
        kG, [](Analysis& a) {
          const auto q = q_constant_bounds(a.space(), absolute(a.g()), a.order);
          return bound(q.lower, q.k_est);
        });
    add("eq_7_2", "dominated => int (1 + (alpha-1) g)_+^beta <= (e alpha)^beta", kClosedForm, kG,
        [](Analysis& a) {
          const auto& n = a.necessary();
          return a.certificate().dominated ? bound(n.lhs_72, n.rhs_72) : premise_fails(n.lhs_72);
        });
    add("prop_8_1_mean", "dominated => int g dmu <= 0", kClosedForm, kG, [](Analysis& a) {
      const double m = a.necessary().mean;
      return a.certificate().dominated ? bound(m, 0.0) : premise_fails(m);
    });
    add("eq_8_2", "dominated => int (1 + g/(beta-1))_+^{beta-1} <= 1", kClosedForm, kG, [](Analysis& a) {
      const double l = a.necessary().lhs_82;
      return a.certificate().dominated ? bound(l, 1.0) : premise_fails(l);
    });
    add("eq_8_3", "int (1 + g/beta)_+^beta <= 1 => dominated (max R <= 0)", kClosedForm, kG, [](Analysis& a) {
      const double r = a.certificate().r_at_extremizer;
      return sufficient_condition(a.space(), a.g(), a.order) ? bound(r, 0.0) : premise_fails(r);
    });
    add("prop_8_2", "dominated => c <= -beta", kClosedForm, kG, [](Analysis& a) {
      const auto& cert = a.certificate();
      return cert.dominated ? bound(cert.c, -a.order.beta) : premise_fails(cert.c);
    });
    add("prop_8_2_lower", "dominated => c >= -beta + int g | -4 + alpha int g", kClosedForm, kG,
        [](Analysis& a) {
          const auto& cert = a.certificate();
          if (!cert.dominated) return premise_fails(cert.c);
          const auto cb = c_bounds(cert, a.space(), a.g(), a.order);
          return bound(cb.c_lower, cert.c);
        });
    add("eq_8_6_8_7", "dominated => int g_+^beta <= beta^beta (1 - int g) | beta^beta (4 - alpha int g)",
        kClosedForm, kG, [](Analysis& a) {
          const auto& cert = a.certificate();
          if (!cert.dominated) {
            const double beta = a.order.beta;
            return premise_fails(a.space().integrate_by([&](std::size_t i) {
              return a.g()[i] > 0.0 ? std::pow(a.g()[i], beta) : 0.0;
            }));
          }
          const auto cb = c_bounds(cert, a.space(), a.g(), a.order);
          return bound(cb.moment_lhs, cb.moment_rhs);
        });

    // ---- transport -------------------------------------------------------------------
    add("eq_3_5", "W_p^p <= 2^{p-1} int rho(x, x0)^p |f - 1| dmu", kClosedForm, kF | kMetric, [](Analysis& a) {
      const auto r = check_tv_bound_3_5(*a.inst.metric, a.f(), a.p());
      return bound(r.lhs, r.rhs);
    });
    auto corollary = [](std::string id) {
      return [id](Analysis& a) {
        for (const auto& r : a.corollaries()) {
          if (r.check_id != id) continue;
          Outcome o = r.status == CheckStatus::Vacuous ? premise_fails(r.lhs) : bound(r.lhs, r.rhs);
          o.note = r.note;
          return o;
        }
        throw Error(ErrorCode::SolverFailure, "transport bounds did not report " + id);
      };
    };
    add("cor_3_1a", "1 < alpha <= 2: W_p <= C M_{beta p} max(T^{1/2p}, T^{1/(alpha p)}), derived C",
        kClosedForm, kF | kMetric, corollary("cor_3_1a"));
    add("cor_3_1b", "alpha >= 2: W_p <= 2 3^{alpha/p} M_{beta p} T^{1/(alpha p)}", kClosedForm, kF | kMetric,
        corollary("cor_3_1b"));
    add("cor_3_2", "W_p <= C^{1/p} M_{(2beta*-2)p} T^{1/(2p)}", kClosedForm, kF | kMetric, corollary("cor_3_2"));
    return d;
  }();
  return defs;
}

const Definition& find_definition(const std::string& id) {
  for (const auto& d : definitions()) {
    if (d.info.id == id) return d;
  }
  throw Error(ErrorCode::ConfigError, "no check named '" + id + "'");
}

CheckReport finalize(const Definition& def, const Outcome& o, const Instance& inst, const std::string& digest,
                     double tolerance_scale) {
  CheckReport r = o.vacuous ? vacuous_report(def.info.id, o.lhs)
                            : make_report(def.info.id, o.lhs, o.rhs, def.info.tolerance * tolerance_scale);
  r.instance_digest = digest;
  r.seed = inst.seed;
  r.alpha = inst.alpha;
  r.note = o.note;
  if (r.status == CheckStatus::Fail || r.status == CheckStatus::BugSuspected) r.instance = instance_to_json(inst);
  return r;
}

}  // namespace

const std::vector<CheckInfo>& registered_checks() {
  static const std::vector<CheckInfo> infos = [] {
    std::vector<CheckInfo> v;
    for (const auto& d : definitions()) v.push_back(d.info);
    return v;
  }();
  return infos;
}

const CheckInfo& find_check(const std::string& id) { return find_definition(id).info; }

std::vector<std::string> resolve_check_ids(const std::vector<std::string>& requested) {
  if (requested.empty()) throw Error(ErrorCode::ConfigError, "check allowlist is empty");
  std::vector<std::string> wanted;
  for (const auto& id : requested) {
    if (id == "all") {
      for (const auto& d : definitions()) wanted.push_back(d.info.id);
    } else if (id == "pinsker") {
      wanted.push_back("eq_1_1");
    } else {
      wanted.push_back(find_definition(id).info.id);
    }
  }
  std::vector<std::string> out;
  for (const auto& d : definitions()) {
    if (std::find(wanted.begin(), wanted.end(), d.info.id) != wanted.end()) out.push_back(d.info.id);
  }
  return out;
}

std::vector<CheckReport> evaluate_checks(const Instance& inst, const std::vector<std::string>& ids,
                                         double tolerance_scale) {
  Analysis analysis(inst);
  const std::string digest = instance_digest(inst);
  std::vector<CheckReport> out;
  for (const auto& id : ids) {
    const Definition& def = find_definition(id);
    if (!has_inputs(inst, def.needs)) continue;
    Outcome o;
    try {
      o = def.run(analysis);
    } catch (const Error& e) {
      o = bound(kNaN, kNaN);
      o.note = e.what();
    }
    out.push_back(finalize(def, o, inst, digest, tolerance_scale));
  }
  return out;
}

CheckReport replay(const CheckReport& report, double tolerance_scale) {
  if (!report.instance) throw Error(ErrorCode::ParseError, "report has no embedded instance");
  const Instance inst = instance_from_json(*report.instance);
  const auto reports = evaluate_checks(inst, {report.check_id}, tolerance_scale);
  if (reports.empty()) throw Error(ErrorCode::ConfigError, "embedded instance lacks inputs for " + report.check_id);
  return reports.front();
}

}  // namespace wckp
