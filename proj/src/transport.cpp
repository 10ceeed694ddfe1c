#include "wckp/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "wckp/divergences.hpp"
#include "wckp/error.hpp"

namespace wckp {

namespace {

constexpr double kMassEpsilon = 1e-15;
constexpr double kClosedFormTolerance = 1e-9;
constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<std::vector<double>> cost_matrix(const MetricSpace& ms, double p) {
  const std::size_t n = ms.size();
  std::vector<std::vector<double>> c(n, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) c[i][j] = p == 1.0 ? ms.distance(i, j) : std::pow(ms.distance(i, j), p);
  }
  return c;
}

}  // namespace

MetricSpace make_metric_space(Space space, std::vector<std::vector<double>> dist, std::size_t base) {
  const std::size_t n = space.size();
  if (dist.size() != n) throw Error(ErrorCode::BadMetric, "distance matrix has wrong row count");
  if (base >= n) throw Error(ErrorCode::BadMetric, "base index out of range");
  double scale = 0.0;
  for (const auto& row : dist) {
    if (row.size() != n) throw Error(ErrorCode::BadMetric, "distance matrix is not square");
    for (double d : row) {
      if (!std::isfinite(d) || d < 0.0) throw Error(ErrorCode::BadMetric, "distances must be finite and nonnegative");
      scale = std::max(scale, d);
    }
  }
  const double sym_tol = 1e-12 * std::max(1.0, scale);
  for (std::size_t i = 0; i < n; ++i) {
    if (dist[i][i] != 0.0) throw Error(ErrorCode::BadMetric, "nonzero diagonal at " + std::to_string(i));
    for (std::size_t j = 0; j < i; ++j) {
      if (std::abs(dist[i][j] - dist[j][i]) > sym_tol) {
        throw Error(ErrorCode::BadMetric, "asymmetric at (" + std::to_string(i) + "," + std::to_string(j) + ")");
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t k = 0; k < n; ++k) {
        if (dist[i][k] > dist[i][j] + dist[j][k] + 1e-9) {
          throw Error(ErrorCode::BadMetric, "triangle inequality fails at (" + std::to_string(i) + "," +
                                                std::to_string(j) + "," + std::to_string(k) + ")");
        }
      }
    }
  }
  return MetricSpace(std::move(space), std::move(dist), base);
}

std::vector<std::vector<double>> shortest_path_closure(std::vector<std::vector<double>> d) {
  const std::size_t n = d.size();
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
    }
  }
  return d;
}

WassersteinResult wasserstein(const MetricSpace& ms, const Density& f, double p) {
  if (!(p >= 1.0)) throw Error(ErrorCode::BadExponent, "transport order must be >= 1");
  const std::size_t n = ms.size();
  if (f.size() != n) throw Error(ErrorCode::SizeMismatch, "density size differs from space");
  const auto cost = cost_matrix(ms, p);

  std::vector<double> supply(ms.space().weights().begin(), ms.space().weights().end());
  std::vector<double> demand = f.masses(ms.space());
  std::vector<std::vector<double>> flow(n, std::vector<double>(n, 0.0));

  // Nodes 0..n−1 are rows (μ), n..2n−1 columns (ν). Residual arcs: row i → column j
  // always, column j → row i while flow[i][j] > 0. Reduced costs stay ≥ 0 under pot.
  const std::size_t nodes = 2 * n;
  std::vector<double> pot(nodes, 0.0), dist(nodes);
  std::vector<std::size_t> parent(nodes);
  std::vector<char> done(nodes);
  constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

  auto remaining = [&] {
    double s = 0.0;
    for (double x : demand) s += std::max(x, 0.0);
    return s;
  };

  std::size_t phases = 0;
  const std::size_t phase_cap = 50 * n * n + 100;
  while (remaining() > n * kMassEpsilon) {
    if (++phases > phase_cap) throw Error(ErrorCode::SolverFailure, "augmentation count exceeded");
    double supply_left = 0.0;
    for (double x : supply) supply_left += std::max(x, 0.0);
    if (supply_left <= n * kMassEpsilon) {
      // Marginals agree to rounding; what is left is summation residue.
      if (remaining() > 1e-12) throw Error(ErrorCode::SolverFailure, "marginals are unbalanced");
      break;
    }
    std::fill(dist.begin(), dist.end(), kInf);
    std::fill(parent.begin(), parent.end(), kNone);
    std::fill(done.begin(), done.end(), 0);
    for (std::size_t i = 0; i < n; ++i) {
      if (supply[i] > kMassEpsilon) dist[i] = 0.0;
    }

    std::size_t target = kNone;
    for (;;) {
      std::size_t u = kNone;
      for (std::size_t v = 0; v < nodes; ++v) {
        if (!done[v] && dist[v] < kInf && (u == kNone || dist[v] < dist[u])) u = v;
      }
      if (u == kNone) break;
      done[u] = 1;
      if (u >= n && demand[u - n] > kMassEpsilon) {
        target = u;
        break;
      }
      if (u < n) {
        for (std::size_t j = 0; j < n; ++j) {
          const std::size_t v = n + j;
          const double reduced = std::max(0.0, cost[u][j] + pot[u] - pot[v]);
          if (!done[v] && dist[u] + reduced < dist[v]) {
            dist[v] = dist[u] + reduced;
            parent[v] = u;
          }
        }
      } else {
        const std::size_t j = u - n;
        for (std::size_t i = 0; i < n; ++i) {
          if (flow[i][j] <= 0.0) continue;
          const double reduced = std::max(0.0, -cost[i][j] + pot[u] - pot[i]);
          if (!done[i] && dist[u] + reduced < dist[i]) {
            dist[i] = dist[u] + reduced;
            parent[i] = u;
          }
        }
      }
    }
    if (target == kNone) throw Error(ErrorCode::SolverFailure, "no augmenting path for balanced marginals");

    const double reach = dist[target];
    for (std::size_t v = 0; v < nodes; ++v) pot[v] += std::min(dist[v], reach);

    // Bottleneck along the path; the path alternates row → column → row ...
    double amount = demand[target - n];
    std::size_t v = target;
    while (parent[v] != kNone) {
      const std::size_t u = parent[v];
      if (u >= n) amount = std::min(amount, flow[v][u - n]);  // backward arc column → row
      v = u;
    }
    const std::size_t source = v;
    amount = std::min(amount, supply[source]);

    v = target;
    while (parent[v] != kNone) {
      const std::size_t u = parent[v];
      if (u < n) {
        flow[u][v - n] += amount;
      } else {
        flow[v][u - n] -= amount;
        if (flow[v][u - n] < kMassEpsilon * 1e-3) flow[v][u - n] = 0.0;
      }
      v = u;
    }
    supply[source] -= amount;
    demand[target - n] -= amount;
  }

  WassersteinResult r;
  r.plan.pi = flow;
  std::vector<double> terms;
  terms.reserve(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) terms.push_back(flow[i][j] * cost[i][j]);
  }
  r.plan.cost = std::max(0.0, pairwise_sum(terms));
  r.value = std::pow(r.plan.cost, 1.0 / p);
  r.row_potential.resize(n);
  r.col_potential.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    r.row_potential[i] = -pot[i];
    r.col_potential[i] = pot[n + i];
  }
  return r;
}

DualCertificate verify_duals(const MetricSpace& ms, const Density& f, double p, const WassersteinResult& r) {
  const std::size_t n = ms.size();
  const auto cost = cost_matrix(ms, p);
  const auto nu = f.masses(ms.space());
  DualCertificate c;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double slack = r.row_potential[i] + r.col_potential[j] - cost[i][j];
      c.max_violation = std::max(c.max_violation, slack);
      if (r.plan.pi[i][j] > 0.0) c.max_cs_gap = std::max(c.max_cs_gap, std::abs(slack));
    }
  }
  std::vector<double> terms;
  for (std::size_t i = 0; i < n; ++i) {
    terms.push_back(ms.space().weight(i) * r.row_potential[i]);
    terms.push_back(nu[i] * r.col_potential[i]);
  }
  c.dual_value = pairwise_sum(terms);
  return c;
}

std::vector<double> kantorovich_potential(const MetricSpace& ms, const WassersteinResult& r) {
  const std::size_t n = ms.size();
  std::vector<double> phi(n, kInf);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) phi[i] = std::min(phi[i], ms.distance(i, j) - r.col_potential[j]);
  }
  return phi;
}

double m_p_moment(const MetricSpace& ms, double p) {
  if (!(p >= 1.0)) throw Error(ErrorCode::BadExponent, "moment order must be >= 1");
  std::vector<double> d(ms.size());
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = ms.distance(i, ms.base_index());
  return lp_norm(ms.space(), d, p);
}

CheckReport check_tv_bound_3_5(const MetricSpace& ms, const Density& f, double p) {
  const double wp = wasserstein(ms, f, p).plan.cost;
  std::vector<double> w(ms.size());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = std::pow(ms.distance(i, ms.base_index()), p);
  const double rhs = std::pow(2.0, p - 1.0) * weighted_tv(ms.space(), f, RealFunction(w));
  return make_report("eq_3_5", wp, rhs, kClosedFormTolerance);
}

std::vector<CheckReport> check_corollaries_3(const MetricSpace& ms, const Density& f, const Order& order,
                                             double p) {
  const double alpha = order.alpha;
  const double beta = order.beta;
  const double w = wasserstein(ms, f, p).value;
  const double t = tsallis(ms.space(), f, order);
  std::vector<CheckReport> out;

  if (alpha <= 2.0) {
    // Weighted-TV bound with w = ρ^p composed with the small-order TV bound.
    const double constant = std::pow(std::pow(2.0, p - 1.0) * 16.0 / 3.0, 1.0 / p);
    const double rhs = constant * m_p_moment(ms, beta * p) *
                       std::max(std::pow(t, 1.0 / (2.0 * p)), std::pow(t, 1.0 / (alpha * p)));
    out.push_back(make_report("cor_3_1a", w, rhs, kClosedFormTolerance));
    out.back().note = "derived constant";
  } else {
    out.push_back(vacuous_report("cor_3_1a", w));
  }
  if (alpha >= 2.0) {
    const double rhs = 2.0 * std::pow(3.0, alpha / p) * m_p_moment(ms, beta * p) * std::pow(t, 1.0 / (alpha * p));
    out.push_back(make_report("cor_3_1b", w, rhs, kClosedFormTolerance));
  } else {
    out.push_back(vacuous_report("cor_3_1b", w));
  }
  const double c_beta = alpha >= 2.0 ? 2.0 : 16.0 * std::pow(beta, beta);
  const double rhs = std::pow(c_beta, 1.0 / p) * m_p_moment(ms, (2.0 * order.beta_star - 2.0) * p) *
                     std::pow(t, 1.0 / (2.0 * p));
  out.push_back(make_report("cor_3_2", w, rhs, kClosedFormTolerance));
  return out;
}

}  // namespace wckp
