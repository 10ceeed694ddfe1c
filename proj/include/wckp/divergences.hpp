#pragma once

#include <span>

#include "wckp/measure.hpp"

namespace wckp {

/// Kullback-Leibler divergence ∫ f log f dμ (0·log 0 = 0).
double kl(const Space& space, const Density& f);

/// ∫ f^α dμ − 1, accumulated as Σ μᵢ[(1+dᵢ)^α − 1 − α dᵢ] with d = f − 1 so every
/// term is nonnegative and the near-μ regime keeps full relative precision.
double power_moment_excess(const Space& space, const Density& f, double alpha);

/// Same quantity from a deviation d = f − 1 (Σμd = 0, d ≥ −1), for callers that
/// hold perturbations too small to survive the round trip through f.
double power_moment_excess_from_deviation(const Space& space, std::span<const double> deviation,
                                          double alpha);

/// (1+x)^α − 1 − αx, accurate for small |x|.
double bregman_power(double x, double alpha);

/// Rényi divergence D_α = log(∫f^α dμ)/(α−1).
double renyi(const Space& space, const Density& f, const Order& order);

/// Tsallis distance T_α = (∫f^α dμ − 1)/(α−1). Shares the accumulated sum with renyi().
double tsallis(const Space& space, const Density& f, const Order& order);

/// Pearson-Vajda distance χ_α = ∫|f−1|^α dμ.
double pearson_vajda(const Space& space, const Density& f, const Order& order);

/// ∫ w|f−1| dμ; throws NegativeWeightFunction if some wᵢ < 0.
double weighted_tv(const Space& space, const Density& f, const RealFunction& w);

/// Plain total variation ∫|f−1| dμ.
double total_variation(const Space& space, const Density& f);

/// log ∫ e^{h} dμ, evaluated without overflow.
double log_mean_exp(const Space& space, std::span<const double> h);

}  // namespace wckp
