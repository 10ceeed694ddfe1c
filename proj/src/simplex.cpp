#include "wckp/simplex.hpp"

#include <limits>
#include <algorithm>
#include <numeric>

#include "wckp/error.hpp"

namespace wckp {

std::vector<double> project_weighted_simplex(std::span<const double> mu, std::span<const double> y,
                                             std::span<const double> metric, double total,
                                             double lower) {
  const std::size_t n = y.size();
  if (mu.size() != n || metric.size() != n) {
    throw Error(ErrorCode::SizeMismatch, "projection operands differ in size");
  }
  // Shift so the bound is zero: z = x − lower, target Σμz = total − lower·Σμ.
  const double mass = std::accumulate(mu.begin(), mu.end(), 0.0);
  const double target = total - lower * mass;

  // zᵢ(t) = max(yᵢ − lower − t/dᵢ, 0) is positive while t < bᵢ = (yᵢ − lower)·dᵢ.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::vector<double> breakpoint(n);
  for (std::size_t i = 0; i < n; ++i) breakpoint[i] = (y[i] - lower) * metric[i];
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return breakpoint[a] > breakpoint[b]; });

  // Σ_{active} μᵢ(yᵢ − lower) − t Σ_{active} μᵢ/dᵢ = target.
  double a = 0.0, b = 0.0, t = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t i = order[k];
    a += mu[i] * (y[i] - lower);
    b += mu[i] / metric[i];
    t = (a - target) / b;
    const double next = (k + 1 < n) ? breakpoint[order[k + 1]] : -std::numeric_limits<double>::infinity();
    if (t >= next) break;
  }

  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = lower + std::max(y[i] - lower - t / metric[i], 0.0);
  return x;
}

std::vector<double> project_weighted_simplex(std::span<const double> mu, std::span<const double> y,
                                             double total, double lower) {
  const std::vector<double> ones(y.size(), 1.0);
  return project_weighted_simplex(mu, y, ones, total, lower);
}

}  // namespace wckp
