#pragma once

#include <span>
#include <vector>

namespace wckp {

/// Projection of y onto {x ≥ lower, Σ μᵢ xᵢ = total} in the metric Σ μᵢ dᵢ (xᵢ − yᵢ)².
/// Solution has the form xᵢ = max(yᵢ − t/dᵢ, lower); t is found exactly from
/// the sorted breakpoints. Requires Σ μᵢ lower < total and every dᵢ > 0.
std::vector<double> project_weighted_simplex(std::span<const double> mu, std::span<const double> y,
                                             std::span<const double> metric, double total,
                                             double lower = 0.0);

/// Unit-metric variant.
std::vector<double> project_weighted_simplex(std::span<const double> mu, std::span<const double> y,
                                             double total, double lower = 0.0);

}  // namespace wckp
