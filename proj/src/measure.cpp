#include "wckp/measure.hpp"

#include <cmath>
#include <string>

#include "wckp/error.hpp"

namespace wckp {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::EmptySpace: return "EmptySpace";
    case ErrorCode::NonpositiveWeight: return "NonpositiveWeight";
    case ErrorCode::BadNormalization: return "BadNormalization";
    case ErrorCode::NonFiniteValue: return "NonFiniteValue";
    case ErrorCode::SizeMismatch: return "SizeMismatch";
    case ErrorCode::NegativeDensity: return "NegativeDensity";
    case ErrorCode::BadExponent: return "BadExponent";
    case ErrorCode::BadOrder: return "BadOrder";
    case ErrorCode::NegativeWeightFunction: return "NegativeWeightFunction";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::OracleNotConverged: return "OracleNotConverged";
    case ErrorCode::NegativeG: return "NegativeG";
    case ErrorCode::NotDominated: return "NotDominated";
    case ErrorCode::NotCentered: return "NotCentered";
    case ErrorCode::ZeroFunction: return "ZeroFunction";
    case ErrorCode::SolverFailure: return "SolverFailure";
    case ErrorCode::BadMetric: return "BadMetric";
    case ErrorCode::UnknownProfile: return "UnknownProfile";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

namespace {

constexpr double kInputTolerance = 1e-9;

double pairwise_sum_impl(const double* x, std::size_t n) {
  if (n <= 8) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += x[i];
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_sum_impl(x, half) + pairwise_sum_impl(x + half, n - half);
}

void require_size(std::size_t expected, std::size_t got, const char* what) {
  if (expected != got) {
    throw Error(ErrorCode::SizeMismatch, std::string(what) + " has " + std::to_string(got) +
                                             " entries, space has " + std::to_string(expected));
  }
}

}  // namespace

double pairwise_sum(std::span<const double> xs) { return pairwise_sum_impl(xs.data(), xs.size()); }

double Space::integrate(std::span<const double> h) const {
  require_size(size(), h.size(), "integrand");
  return integrate_by([&](std::size_t i) { return h[i]; });
}

Space make_space(std::span<const double> weights) {
  if (weights.empty()) throw Error(ErrorCode::EmptySpace, "no atoms");
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (!std::isfinite(weights[i])) {
      throw Error(ErrorCode::NonFiniteValue, "weight " + std::to_string(i) + " is not finite");
    }
    if (weights[i] <= 0.0) {
      throw Error(ErrorCode::NonpositiveWeight, "weight " + std::to_string(i) + " is not positive");
    }
  }
  const double total = pairwise_sum(weights);
  if (std::abs(total - 1.0) > kInputTolerance) {
    throw Error(ErrorCode::BadNormalization, "weights sum to " + std::to_string(total));
  }
  std::vector<double> w(weights.begin(), weights.end());
  for (double& x : w) x /= total;
  return Space(std::move(w));
}

RealFunction::RealFunction(std::vector<double> values) : values_(std::move(values)) {
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) {
      throw Error(ErrorCode::NonFiniteValue, "function value " + std::to_string(i) + " is not finite");
    }
  }
}

std::vector<double> Density::masses(const Space& space) const {
  require_size(space.size(), size(), "density");
  std::vector<double> m(size());
  for (std::size_t i = 0; i < size(); ++i) m[i] = space.weight(i) * values_[i];
  return m;
}

Density make_density(const Space& space, std::span<const double> values, double tolerance) {
  require_size(space.size(), values.size(), "density");
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      throw Error(ErrorCode::NonFiniteValue, "density value " + std::to_string(i) + " is not finite");
    }
    if (values[i] < 0.0) {
      throw Error(ErrorCode::NegativeDensity, "density value " + std::to_string(i) + " is negative");
    }
  }
  const double total = space.integrate(values);
  if (!(std::abs(total - 1.0) <= tolerance)) {
    throw Error(ErrorCode::BadNormalization, "density integrates to " + std::to_string(total));
  }
  std::vector<double> f(values.begin(), values.end());
  for (double& x : f) x /= total;
  return Density(std::move(f));
}

Density density_from_masses(const Space& space, std::span<const double> masses) {
  require_size(space.size(), masses.size(), "masses");
  std::vector<double> f(masses.size());
  for (std::size_t i = 0; i < masses.size(); ++i) f[i] = masses[i] / space.weight(i);
  return make_density(space, f);
}

Density uniform_density(const Space& space) {
  return make_density(space, std::vector<double>(space.size(), 1.0));
}

Order make_order(double alpha) {
  if (!(alpha > 1.0 && alpha <= 50.0)) {
    throw Error(ErrorCode::BadOrder, "alpha must lie in (1, 50], got " + std::to_string(alpha));
  }
  const double beta = alpha / (alpha - 1.0);
  return Order{alpha, beta, std::max(beta, 2.0)};
}

double lp_norm(const Space& space, std::span<const double> h, double p) {
  if (!(p >= 1.0)) throw Error(ErrorCode::BadExponent, "p must be >= 1");
  require_size(space.size(), h.size(), "function");
  if (std::isinf(p)) {
    double m = 0.0;
    for (double x : h) m = std::max(m, std::abs(x));
    return m;
  }
  // Scale by the sup norm so |h|^p stays in range for large p.
  double scale = 0.0;
  for (double x : h) scale = std::max(scale, std::abs(x));
  if (scale == 0.0) return 0.0;
  const double s = space.integrate_by([&](std::size_t i) { return std::pow(std::abs(h[i]) / scale, p); });
  return scale * std::pow(s, 1.0 / p);
}

double mean(const Space& space, const RealFunction& h) { return space.integrate(h.values()); }

RealFunction center(const Space& space, const RealFunction& u) {
  require_size(space.size(), u.size(), "function");
  std::vector<double> v(u.values().begin(), u.values().end());
  // Second pass removes the rounding residue of the first.
  for (int pass = 0; pass < 2; ++pass) {
    const double m = space.integrate(v);
    for (double& x : v) x -= m;
  }
  return RealFunction(std::move(v));
}

}  // namespace wckp
