#include "wckp/linearization.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "wckp/divergences.hpp"
#include "wckp/error.hpp"
#include "wckp/simplex.hpp"

namespace wckp {

namespace {

constexpr double kDominationTolerance = 1e-10;
constexpr int kBisectionCap = 200;
constexpr double kRootTolerance = 1e-12;

constexpr double kOracleTolerance = 1e-9;
constexpr int kOracleIterations = 100000;

void require_size(const Space& space, const RealFunction& g) {
  if (space.size() != g.size()) throw Error(ErrorCode::SizeMismatch, "g size differs from space");
}

// ∫((g−c)/β)₊^q dμ. Dividing by β keeps every power in range for large β.
double scaled_positive_moment(const Space& space, const RealFunction& g, double beta, double c,
                              double q) {
  return space.integrate_by([&](std::size_t i) {
    const double t = (g[i] - c) / beta;
    return t > 0.0 ? std::pow(t, q) : 0.0;
  });
}

// φ(c)/β^{β−1}; the root equation reads normalized_phi(c) = 1.
double normalized_phi(const Space& space, const RealFunction& g, double beta, double c) {
  return scaled_positive_moment(space, g, beta, c, beta - 1.0);
}

double r_value(const Space& space, std::span<const double> g, double alpha, std::span<const double> f) {
  std::vector<double> dev(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) dev[i] = f[i] - 1.0;
  const double linear = space.integrate_by([&](std::size_t i) { return f[i] * g[i]; });
  return linear - power_moment_excess_from_deviation(space, dev, alpha) / (alpha - 1.0);
}

// R(f1) − R(f0) accumulated term by term, so increments far below the rounding
// unit of R itself still register. fᵢ^α increments go through expm1/log1p.
double r_increment(const Space& space, std::span<const double> g, double alpha, std::span<const double> f0,
                   std::span<const double> f1) {
  return space.integrate_by([&](std::size_t i) {
    const double df = f1[i] - f0[i];
    double dpow;
    if (f0[i] > 0.0 && f1[i] > 0.0) {
      dpow = std::pow(f0[i], alpha) * std::expm1(alpha * std::log1p(df / f0[i]));
    } else {
      dpow = std::pow(f1[i], alpha) - std::pow(f0[i], alpha);
    }
    return df * g[i] - dpow / (alpha - 1.0);
  });
}

}  // namespace

double phi(const Space& space, const RealFunction& g, double beta, double c) {
  require_size(space, g);
  if (!(beta > 1.0)) throw Error(ErrorCode::BadExponent, "beta must exceed 1");
  return space.integrate_by([&](std::size_t i) {
    const double t = g[i] - c;
    return t > 0.0 ? std::pow(t, beta - 1.0) : 0.0;
  });
}

namespace {

// Root of normalized_phi = 1 for g with max g = 0. Everything is translation
// equivariant in g, and anchoring the top atom at zero keeps (g−c) free of
// cancellation when g carries a large common offset.
// The root as base + offset. After the first bisection pins c between two
// adjacent doubles, a second bisection on the offset resolves the gaps
// (gᵢ − base) − offset below the spacing of doubles near c; those gaps are exact
// for the atoms next to c, which are the ones where t^{β−1} is steepest.
struct SplitRoot {
  double base = 0.0;
  double offset = 0.0;
  double value() const { return base + offset; }
};

double split_moment(const Space& space, const RealFunction& g, double beta, const SplitRoot& r, double q) {
  return space.integrate_by([&](std::size_t i) {
    const double t = ((g[i] - r.base) - r.offset) / beta;
    return t > 0.0 ? std::pow(t, q) : 0.0;
  });
}

template <class Phi>
std::pair<double, double> bisect_decreasing(Phi&& phi, double lo, double hi) {
  for (int it = 0; it < kBisectionCap; ++it) {
    const double mid = lo + 0.5 * (hi - lo);
    if (!(mid > lo && mid < hi)) break;
    if (phi(mid) >= 1.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return {lo, hi};
}

SplitRoot solve_anchored(const Space& space, const RealFunction& g, const Order& order) {
  const double beta = order.beta;
  const auto [gmin_it, gmax_it] = std::minmax_element(g.values().begin(), g.values().end());
  // φ vanishes at max g; at min g − β − 1 every (g−c)/β exceeds 1, so φ/β^{β−1} > 1.
  auto [lo, hi] = bisect_decreasing([&](double c) { return normalized_phi(space, g, beta, c); },
                                    *gmin_it - beta - 1.0, *gmax_it);
  const double width = hi - lo;
  if (width > kRootTolerance && std::nextafter(lo, hi) < hi) {
    throw Error(ErrorCode::NoConvergence, "bisection bracket still " + std::to_string(width) + " wide");
  }
  auto phi_at = [&](double off) { return split_moment(space, g, beta, SplitRoot{lo, off}, beta - 1.0); };
  const auto [olo, ohi] = bisect_decreasing(phi_at, 0.0, width);
  const double rlo = std::abs(phi_at(olo) - 1.0);
  const double rhi = std::abs(phi_at(ohi) - 1.0);
  return SplitRoot{lo, rlo <= rhi ? olo : ohi};
}

RealFunction anchored(const RealFunction& g, double& top) {
  top = *std::max_element(g.values().begin(), g.values().end());
  std::vector<double> v(g.values().begin(), g.values().end());
  for (double& x : v) x -= top;
  return RealFunction(std::move(v));
}

}  // namespace

double solve_c(const Space& space, const RealFunction& g, const Order& order) {
  require_size(space, g);
  double top = 0.0;
  const RealFunction h = anchored(g, top);
  return solve_anchored(space, h, order).value() + top;
}

double domination_gap_at(const Space& space, const RealFunction& g, const Order& order, double c) {
  require_size(space, g);
  const double beta = order.beta;
  return scaled_positive_moment(space, g, beta, c, beta) + c + beta - 1.0;
}

DominationCertificate dominated(const Space& space, const RealFunction& g, const Order& order) {
  require_size(space, g);
  const double beta = order.beta;
  double top = 0.0;
  const RealFunction h = anchored(g, top);
  const SplitRoot root = solve_anchored(space, h, order);
  const double c = root.value() + top;

  std::vector<double> f(space.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double t = ((h[i] - root.base) - root.offset) / beta;
    f[i] = t > 0.0 ? std::pow(t, beta - 1.0) : 0.0;
  }
  const double raw_mass = space.integrate(f);
  DominationCertificate cert{.extremizer = make_density(space, f)};
  cert.c = c;
  cert.normalization_error = std::abs(raw_mass - 1.0);
  cert.root_residual = cert.normalization_error;

  const double beta_pow = std::pow(beta, beta);
  const double moment = split_moment(space, h, beta, root, beta);
  cert.lhs_42 = beta_pow * moment;
  cert.rhs_42 = -beta_pow * (c + beta - 1.0);
  cert.margin = -(((root.base + top) + (beta - 1.0)) + root.offset) - moment;
  cert.dominated = cert.margin >= -kDominationTolerance;
  cert.r_at_extremizer = -cert.margin;
  return cert;
}

Density extremizer(const Space& space, const RealFunction& g, const Order& order) {
  return dominated(space, g, order).extremizer;
}

double r_functional(const Space& space, const RealFunction& g, const Order& order, const Density& f) {
  require_size(space, g);
  if (f.size() != space.size()) throw Error(ErrorCode::SizeMismatch, "density size differs from space");
  return r_value(space, g.values(), order.alpha, f.values());
}

OracleResult maximize_r(const Space& space, const RealFunction& g, const Order& order) {
  require_size(space, g);
  const std::size_t n = space.size();
  const double alpha = order.alpha;
  const double beta = order.beta;
  const auto mu = space.weights();

  // Curvature of −R along coordinate i is α f^{α−2}; the floor keeps the metric
  // bounded where f vanishes.
  const double f_floor = alpha < 2.0 ? 1e-8 : 1e-2;

  std::vector<double> f(n, 1.0), grad(n), metric(n), y(n);
  double value = r_value(space, g.values(), alpha, f);
  double stationarity = std::numeric_limits<double>::infinity();

  // Constants are invisible on {∫f dμ = 1}; the gradient and g are shifted by the
  // mean gradient over the support so mass rounding in the projection is not
  // amplified by a large common offset.
  std::vector<double> g_shift(n);
  auto compute_gradient = [&] {
    for (std::size_t i = 0; i < n; ++i) grad[i] = g[i] - beta * std::pow(f[i], alpha - 1.0);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (f[i] > 0.0) {
        num += mu[i] * grad[i];
        den += mu[i];
      }
    }
    const double shift = den > 0.0 ? num / den : 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      grad[i] -= shift;
      g_shift[i] = g[i] - shift;
    }
  };
  auto projected_gradient_norm = [&] {
    for (std::size_t i = 0; i < n; ++i) y[i] = f[i] + grad[i];
    const auto p = project_weighted_simplex(mu, y, 1.0);
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i) m = std::max(m, std::abs(p[i] - f[i]));
    return m;
  };

  int it = 0;
  for (; it < kOracleIterations; ++it) {
    compute_gradient();
    stationarity = projected_gradient_norm();
    if (stationarity < kOracleTolerance) break;

    for (std::size_t i = 0; i < n; ++i) {
      metric[i] = alpha * std::pow(std::max(f[i], f_floor), alpha - 2.0);
    }
    double step = 1.0;
    bool accepted = false;
    std::vector<double> trial;
    for (int ls = 0; ls < 80; ++ls, step *= 0.5) {
      for (std::size_t i = 0; i < n; ++i) y[i] = f[i] + step * grad[i] / metric[i];
      trial = project_weighted_simplex(mu, y, metric, 1.0);
      const double predicted = space.integrate_by([&](std::size_t i) { return grad[i] * (trial[i] - f[i]); });
      const double gain = r_increment(space, g_shift, alpha, f, trial);
      if (gain >= 1e-4 * predicted) {
        accepted = gain > 0.0 || predicted > 0.0;
        f = std::move(trial);
        value += gain;
        break;
      }
    }
    if (!accepted) break;  // rounding floor of R reached
  }

  compute_gradient();
  stationarity = projected_gradient_norm();
  // A stalled line search only happens once R no longer changes in double precision.
  const bool stalled_at_floor = it < kOracleIterations && stationarity < 1e-6;
  if (stationarity >= kOracleTolerance && !stalled_at_floor) {
    throw Error(ErrorCode::OracleNotConverged,
                "projected gradient norm " + std::to_string(stationarity) + " after " +
                    std::to_string(it) + " iterations");
  }
  OracleResult result{make_density(space, f), 0.0, it, stationarity};
  result.value = r_value(space, g.values(), alpha, result.density.values());
  return result;
}

QConstantBounds q_constant_bounds(const Space& space, const RealFunction& g, const Order& order) {
  require_size(space, g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (g[i] < 0.0) throw Error(ErrorCode::NegativeG, "g[" + std::to_string(i) + "] is negative");
  }
  const double alpha = order.alpha;
  const double beta = order.beta;
  const double norm = lp_norm(space, g, beta);
  QConstantBounds out{norm / (std::numbers::e * alpha), norm, 0.0};
  if (norm == 0.0) return out;

  const auto mu = space.weights();
  const std::size_t n = space.size();
  auto ratio = [&](std::span<const double> f) {
    const double num = space.integrate_by([&](std::size_t i) { return f[i] * g[i]; });
    const double den = space.integrate_by([&](std::size_t i) { return std::pow(f[i], alpha); });
    return num / den;
  };
  const double gmax = *std::max_element(g.values().begin(), g.values().end());

  // f_t ∝ (g − (max g − t))₊^{β−1}, t ∈ (0, ∞): the shape every maximizer takes.
  auto family = [&](double t) {
    std::vector<double> f(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double s = (g[i] - gmax + t) / t;
      f[i] = s > 0.0 ? std::pow(s, beta - 1.0) : 0.0;
    }
    const double m = space.integrate(f);
    for (double& x : f) x /= m;
    return f;
  };

  double best = ratio(std::vector<double>(n, 1.0));
  double best_log_t = std::numeric_limits<double>::quiet_NaN();
  const double log_scale = std::log(gmax);
  for (double k = -12.0; k <= 12.0; k += 0.05) {
    const double lt = log_scale + k * std::numbers::ln10;
    const double r = ratio(family(std::exp(lt)));
    if (r > best) {
      best = r;
      best_log_t = lt;
    }
  }
  std::vector<double> start = std::isnan(best_log_t) ? std::vector<double>(n, 1.0) : family(std::exp(best_log_t));
  if (!std::isnan(best_log_t)) {
    // Golden-section refinement in log t around the best grid point.
    double a = best_log_t - 0.05 * std::numbers::ln10, b = best_log_t + 0.05 * std::numbers::ln10;
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = b - inv_phi * (b - a), x2 = a + inv_phi * (b - a);
    double r1 = ratio(family(std::exp(x1))), r2 = ratio(family(std::exp(x2)));
    for (int it = 0; it < 100 && b - a > 1e-14; ++it) {
      if (r1 > r2) {
        b = x2; x2 = x1; r2 = r1;
        x1 = b - inv_phi * (b - a); r1 = ratio(family(std::exp(x1)));
      } else {
        a = x1; x1 = x2; r1 = r2;
        x2 = a + inv_phi * (b - a); r2 = ratio(family(std::exp(x2)));
      }
    }
    const double lt = r1 > r2 ? x1 : x2;
    const double r = std::max(r1, r2);
    if (r > best) {
      best = r;
      start = family(std::exp(lt));
    }
  }

  // Projected gradient polish on the ratio itself.
  std::vector<double> f = start, grad(n), y(n);
  double value = ratio(f);
  double step = 1.0;
  for (int it = 0; it < 500; ++it) {
    const double num = space.integrate_by([&](std::size_t i) { return f[i] * g[i]; });
    const double den = space.integrate_by([&](std::size_t i) { return std::pow(f[i], alpha); });
    for (std::size_t i = 0; i < n; ++i) {
      grad[i] = g[i] / den - num * alpha * std::pow(f[i], alpha - 1.0) / (den * den);
    }
    bool improved = false;
    for (int ls = 0; ls < 60; ++ls) {
      for (std::size_t i = 0; i < n; ++i) y[i] = f[i] + step * grad[i];
      auto trial = project_weighted_simplex(mu, y, 1.0);
      const double v = ratio(trial);
      if (v > value) {
        f = std::move(trial);
        value = v;
        improved = true;
        step *= 2.0;
        break;
      }
      step *= 0.5;
    }
    if (!improved) break;
  }
  out.k_est = std::max(best, value);
  return out;
}

double sufficient_condition_lhs(const Space& space, const RealFunction& g, const Order& order) {
  require_size(space, g);
  const double beta = order.beta;
  return space.integrate_by([&](std::size_t i) {
    const double t = 1.0 + g[i] / beta;
    return t > 0.0 ? std::pow(t, beta) : 0.0;
  });
}

bool sufficient_condition(const Space& space, const RealFunction& g, const Order& order) {
  return sufficient_condition_lhs(space, g, order) <= 1.0;
}

NecessaryConditions necessary_conditions(const Space& space, const RealFunction& g, const Order& order) {
  require_size(space, g);
  const double alpha = order.alpha;
  const double beta = order.beta;
  NecessaryConditions nc;
  nc.mean = mean(space, g);
  nc.lhs_82 = space.integrate_by([&](std::size_t i) {
    const double t = 1.0 + g[i] / (beta - 1.0);
    return t > 0.0 ? std::pow(t, beta - 1.0) : 0.0;
  });
  nc.lhs_72 = space.integrate_by([&](std::size_t i) {
    const double t = 1.0 + (alpha - 1.0) * g[i];
    return t > 0.0 ? std::pow(t, beta) : 0.0;
  });
  nc.rhs_72 = std::pow(std::numbers::e * alpha, beta);
  nc.mean_ok = nc.mean <= kDominationTolerance;
  nc.cond_82_ok = nc.lhs_82 <= 1.0 + kDominationTolerance;
  nc.cond_72_ok = nc.lhs_72 <= nc.rhs_72 * (1.0 + kDominationTolerance);
  return nc;
}

CBoundsReport c_bounds(const DominationCertificate& cert, const Space& space, const RealFunction& g,
                       const Order& order) {
  if (!cert.dominated) throw Error(ErrorCode::NotDominated, "certificate is not dominated");
  require_size(space, g);
  const double alpha = order.alpha;
  const double beta = order.beta;
  const double gmean = mean(space, g);
  const double beta_pow = std::pow(beta, beta);
  CBoundsReport r;
  r.c_upper = -beta;
  r.moment_lhs = space.integrate_by([&](std::size_t i) { return g[i] > 0.0 ? std::pow(g[i], beta) : 0.0; });
  bool ok = cert.c <= r.c_upper + kDominationTolerance;
  auto moment_ok = [&](double rhs) { return r.moment_lhs <= rhs + kDominationTolerance * std::max(1.0, std::abs(rhs)); };
  if (alpha <= 2.0) {
    r.c_lower = -beta + gmean;
    r.moment_rhs = beta_pow * (1.0 - gmean);
    ok = ok && cert.c >= r.c_lower - kDominationTolerance && moment_ok(r.moment_rhs);
  }
  if (alpha >= 2.0) {
    const double lower = -4.0 + alpha * gmean;
    const double rhs = beta_pow * (4.0 - alpha * gmean);
    ok = ok && cert.c >= lower - kDominationTolerance && moment_ok(rhs);
    if (alpha > 2.0) {
      r.c_lower = lower;
      r.moment_rhs = rhs;
    }
  }
  r.ok = ok;
  return r;
}

bool c_bounds_check(const DominationCertificate& cert, const Space& space, const RealFunction& g,
                    const Order& order) {
  return c_bounds(cert, space, g, order).ok;
}

}  // namespace wckp
