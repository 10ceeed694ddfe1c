#include "wckp/divergences.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "wckp/error.hpp"

namespace wckp {

namespace {

void require_size(const Space& space, std::size_t n) {
  if (space.size() != n) throw Error(ErrorCode::SizeMismatch, "function size differs from space");
}

}  // namespace

double bregman_power(double x, double alpha) {
  if (x <= -1.0) return alpha - 1.0;  // f = 0: 0^α − 1 + α
  if (std::abs(x) < 1e-4) {
    // α(α−1)/2 x² [1 + (α−2)x/3 + (α−2)(α−3)x²/12 + (α−2)(α−3)(α−4)x³/60]
    const double a2 = alpha - 2.0, a3 = alpha - 3.0, a4 = alpha - 4.0;
    const double series = 1.0 + x * (a2 / 3.0 + x * (a2 * a3 / 12.0 + x * a2 * a3 * a4 / 60.0));
    return 0.5 * alpha * (alpha - 1.0) * x * x * series;
  }
  return std::expm1(alpha * std::log1p(x)) - alpha * x;
}

double power_moment_excess_from_deviation(const Space& space, std::span<const double> deviation,
                                          double alpha) {
  require_size(space, deviation.size());
  return space.integrate_by([&](std::size_t i) { return bregman_power(deviation[i], alpha); });
}

double power_moment_excess(const Space& space, const Density& f, double alpha) {
  require_size(space, f.size());
  return space.integrate_by([&](std::size_t i) { return bregman_power(f[i] - 1.0, alpha); });
}

double kl(const Space& space, const Density& f) {
  require_size(space, f.size());
  // Σμ(f log f − f + 1): each term is nonnegative and Σμ(f − 1) = 0.
  return space.integrate_by([&](std::size_t i) {
    const double x = f[i] - 1.0;
    if (f[i] == 0.0) return 1.0;
    return (1.0 + x) * std::log1p(x) - x;
  });
}

double renyi(const Space& space, const Density& f, const Order& order) {
  return std::log1p(power_moment_excess(space, f, order.alpha)) / (order.alpha - 1.0);
}

double tsallis(const Space& space, const Density& f, const Order& order) {
  return power_moment_excess(space, f, order.alpha) / (order.alpha - 1.0);
}

double pearson_vajda(const Space& space, const Density& f, const Order& order) {
  require_size(space, f.size());
  return space.integrate_by([&](std::size_t i) { return std::pow(std::abs(f[i] - 1.0), order.alpha); });
}

double weighted_tv(const Space& space, const Density& f, const RealFunction& w) {
  require_size(space, f.size());
  require_size(space, w.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i] < 0.0) {
      throw Error(ErrorCode::NegativeWeightFunction, "w[" + std::to_string(i) + "] is negative");
    }
  }
  return space.integrate_by([&](std::size_t i) { return w[i] * std::abs(f[i] - 1.0); });
}

double total_variation(const Space& space, const Density& f) {
  require_size(space, f.size());
  return space.integrate_by([&](std::size_t i) { return std::abs(f[i] - 1.0); });
}

double log_mean_exp(const Space& space, std::span<const double> h) {
  require_size(space, h.size());
  const double top = *std::max_element(h.begin(), h.end());
  if (std::isinf(top)) return top;
  return top + std::log(space.integrate_by([&](std::size_t i) { return std::exp(h[i] - top); }));
}

}  // namespace wckp
