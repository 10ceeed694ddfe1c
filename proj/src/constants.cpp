#include "wckp/constants.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "wckp/divergences.hpp"
#include "wckp/error.hpp"
#include "wckp/linearization.hpp"
#include "wckp/simplex.hpp"

namespace wckp {

namespace {

double sup_abs(const RealFunction& u) {
  double m = 0.0;
  for (double x : u.values()) m = std::max(m, std::abs(x));
  return m;
}

void require_centered(const Space& space, const RealFunction& u) {
  if (space.size() != u.size()) throw Error(ErrorCode::SizeMismatch, "u size differs from space");
  const double m = mean(space, u);
  if (std::abs(m) > 1e-9 * std::max(1.0, sup_abs(u))) {
    throw Error(ErrorCode::NotCentered, "u has mean " + std::to_string(m));
  }
}

}  // namespace

double truncated_moment(const Space& space, const RealFunction& u, double p, double r) {
  const double s = space.integrate_by([&](std::size_t i) {
    const double a = std::abs(u[i]);
    return a >= r ? std::pow(a, p) : 0.0;
  });
  return std::pow(r, p - 2.0) * s;
}

double k_p(const Space& space, const RealFunction& u, double p) {
  if (!(p >= 2.0)) throw Error(ErrorCode::BadExponent, "K_p needs p >= 2");
  require_centered(space, u);
  const double scale = sup_abs(u);
  if (scale == 0.0) return 0.0;

  // Work with |u|/scale; K_p is 1-homogeneous.
  const std::size_t n = space.size();
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return std::abs(u[a]) > std::abs(u[b]);
  });

  double best = 0.0;
  double tail = 0.0;  // ∫_{|u| ≥ r} |u/scale|^p dμ for r at the current atom value
  for (std::size_t k = 0; k < n;) {
    const double a = std::abs(u[idx[k]]);
    if (a == 0.0) break;
    // Absorb every atom sharing this |u| value.
    std::size_t k2 = k;
    while (k2 < n && std::abs(u[idx[k2]]) == a) {
      tail += space.weight(idx[k2]) * std::pow(a / scale, p);
      ++k2;
    }
    const double value = std::pow(a / scale, p - 2.0) * tail;
    // Strict '>' walking downward in r keeps the largest maximizing r on ties.
    if (value > best) best = value;
    k = k2;
  }
  return scale * std::pow(best, 1.0 / (2.0 * p - 2.0));
}

std::pair<double, double> small_order_interval(const Space& space, const RealFunction& u,
                                               const Order& order) {
  const double beta = order.beta;
  const double kb = k_p(space, u, beta);
  const double bb = std::pow(beta, beta);
  return {0.25 / bb * kb, 2.0 * bb * kb};
}

std::pair<double, double> large_order_interval(const Space& space, const RealFunction& u,
                                               const Order& order) {
  require_centered(space, u);
  const double l2 = lp_norm(space, u, 2.0);
  return {std::sqrt(2.0 / order.alpha) * l2, l2};
}

KInterval best_k_interval(const Space& space, const RealFunction& u, const Order& order) {
  const auto [lo, hi] = order.alpha < 2.0 ? small_order_interval(space, u, order)
                                          : large_order_interval(space, u, order);
  KInterval out{lo, hi, 0.0, order.alpha};
  if (sup_abs(u) > 0.0) out.k_empirical = estimate_best_k(space, u, order);
  return out;
}

double k_ratio_from_deviation(const Space& space, std::span<const double> u,
                              std::span<const double> deviation, double alpha) {
  const double num = space.integrate_by([&](std::size_t i) { return u[i] * deviation[i]; });
  const double t = power_moment_excess_from_deviation(space, deviation, alpha) / (alpha - 1.0);
  if (!(t > 0.0)) return 0.0;
  return std::abs(num) / std::sqrt(t);
}

double estimate_best_k(const Space& space, const RealFunction& u, const Order& order) {
  require_centered(space, u);
  const double norm2 = lp_norm(space, u, 2.0);
  if (!(norm2 > 0.0)) throw Error(ErrorCode::ZeroFunction, "u vanishes");

  const std::size_t n = space.size();
  const double alpha = order.alpha;
  const double beta = order.beta;
  const auto mu = space.weights();

  // Everything below runs on the L²-normalized function so the search path does
  // not depend on the scale of u.
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = u[i] / norm2;
  const RealFunction unit(v);

  double best = 0.0;
  std::vector<double> best_dev(n, 0.0);
  auto consider = [&](const std::vector<double>& dev) {
    const double r = k_ratio_from_deviation(space, v, dev, alpha);
    if (r > best) {
      best = r;
      best_dev = dev;
    }
  };

  // Small perturbations 1 ± εu: the regime where T_α ≈ (α/2)ε²‖u‖².
  const double vmax = sup_abs(unit);
  for (double eps : {0.5, 1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6}) {
    for (double sign : {1.0, -1.0}) {
      std::vector<double> dev(n);
      for (std::size_t i = 0; i < n; ++i) dev[i] = sign * eps * v[i] / vmax;
      consider(dev);
    }
  }

  // Point masses and upper/lower level sets of u.
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] > v[b]; });
  auto indicator = [&](auto first, auto last) {
    double mass = 0.0;
    for (auto it = first; it != last; ++it) mass += mu[*it];
    std::vector<double> dev(n, -1.0);
    for (auto it = first; it != last; ++it) dev[*it] = 1.0 / mass - 1.0;
    return dev;
  };
  for (std::size_t k = 1; k < n; ++k) {
    consider(indicator(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(k)));
    consider(indicator(idx.end() - static_cast<std::ptrdiff_t>(k), idx.end()));
  }

  // Extremal densities of the tilts g = (4/K)λu − 4λ², with K spread over
  // the theoretical bracket and λ straddling √β.
  const auto [lo, hi] = alpha < 2.0 ? small_order_interval(space, unit, order)
                                    : large_order_interval(space, unit, order);
  std::vector<double> ks;
  for (int k = 0; k <= 8; ++k) ks.push_back(hi * std::pow(0.5, k));
  ks.push_back(std::max(lo, 1e-3 * hi));
  std::vector<double> lambdas;
  for (int k = -6; k <= 6; ++k) lambdas.push_back(std::ldexp(1.0, k));
  lambdas.push_back(std::sqrt(beta));
  lambdas.push_back(0.5 * std::sqrt(beta));
  lambdas.push_back(2.0 * std::sqrt(beta));
  std::vector<double> g(n);
  for (double kk : ks) {
    for (double lam0 : lambdas) {
      for (double sign : {1.0, -1.0}) {
        const double lam = sign * lam0;
        for (std::size_t i = 0; i < n; ++i) g[i] = 4.0 / kk * lam * v[i] - 4.0 * lam * lam;
        try {
          const Density f = extremizer(space, RealFunction(g), order);
          std::vector<double> dev(n);
          for (std::size_t i = 0; i < n; ++i) dev[i] = f[i] - 1.0;
          consider(dev);
        } catch (const Error& e) {
          if (e.code() == ErrorCode::NoConvergence) {
            throw Error(ErrorCode::OracleNotConverged, e.what());
          }
          // A tilt so extreme that its extremizer is not representable is
          // simply not a candidate.
          if (e.code() != ErrorCode::BadNormalization) throw;
        }
      }
    }
  }

  // Projected-gradient polish of the ratio in deviation coordinates:
  // {d ≥ −1, ∫d dμ = 0}.
  std::vector<double> d = best_dev, grad(n), y(n);
  double value = best;
  double dmax = 0.0;
  for (double x : d) dmax = std::max(dmax, std::abs(x));
  double step = 0.1 * std::max(dmax, 1e-6);
  for (int it = 0; it < 400 && value > 0.0; ++it) {
    const double num = space.integrate_by([&](std::size_t i) { return v[i] * d[i]; });
    const double t = power_moment_excess_from_deviation(space, d, alpha) / (alpha - 1.0);
    const double sgn = num >= 0.0 ? 1.0 : -1.0;
    const double st = std::sqrt(t);
    double gmax = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double dphi = alpha * std::expm1((alpha - 1.0) * std::log1p(std::max(d[i], -1.0)));
      grad[i] = sgn * v[i] / st - std::abs(num) * dphi / (2.0 * (alpha - 1.0) * t * st);
      gmax = std::max(gmax, std::abs(grad[i]));
    }
    if (gmax == 0.0) break;
    bool improved = false;
    for (int ls = 0; ls < 50; ++ls) {
      for (std::size_t i = 0; i < n; ++i) y[i] = d[i] + step / gmax * grad[i];
      auto trial = project_weighted_simplex(mu, y, 0.0, -1.0);
      const double r = k_ratio_from_deviation(space, v, trial, alpha);
      if (r > value) {
        d = std::move(trial);
        value = r;
        improved = true;
        step *= 2.0;
        break;
      }
      step *= 0.5;
    }
    if (!improved) break;
  }
  return norm2 * std::max(best, value);
}

}  // namespace wckp
