#pragma once

#include "wckp/measure.hpp"

namespace wckp {

/// Best-constant bracket for |∫u dν| ≤ K √T_α(ν‖μ) over all ν, u centered.
struct KInterval {
  double lower = 0.0;
  double upper = 0.0;
  double k_empirical = 0.0;  // attained by explicit densities, hence a lower bound on the best K
  double alpha = 0.0;
};

/// r^{p−2} ∫_{|u| ≥ r} |u|^p dμ.
double truncated_moment(const Space& space, const RealFunction& u, double p, double r);

/// K_p(u) = (sup_{r>0} r^{p−2} ∫_{|u|≥r} |u|^p dμ)^{1/(2p−2)}.
/// The sup over each gap between consecutive |uᵢ| is taken at its right end, so
/// only the atom values need scanning. Throws NotCentered, BadExponent (p < 2).
double k_p(const Space& space, const RealFunction& u, double p);

/// [¼β^{−β} K_β, 2β^β K_β]; valid for 1 < α ≤ 2.
std::pair<double, double> small_order_interval(const Space& space, const RealFunction& u, const Order& order);

/// [√(2/α)‖u‖₂, ‖u‖₂]; valid for α ≥ 2.
std::pair<double, double> large_order_interval(const Space& space, const RealFunction& u, const Order& order);

/// The bracket for the order (α < 2 uses the K_β bracket, α ≥ 2 the L² one),
/// with k_empirical from estimate_best_k(). Throws NotCentered.
KInterval best_k_interval(const Space& space, const RealFunction& u, const Order& order);

/// sup |∫u dν| / √T_α over a search family: extremal densities for the tilts
/// (4/K)λu − 4λ², small perturbations 1 ± εu, indicator densities, then a
/// projected-gradient polish of the ratio. Every candidate is a real density, so
/// the result never exceeds the best constant.
/// Throws NotCentered, ZeroFunction.
double estimate_best_k(const Space& space, const RealFunction& u, const Order& order);

/// |∫u dν| / √T_α with ν given by its deviation d = f − 1 from μ.
double k_ratio_from_deviation(const Space& space, std::span<const double> u,
                              std::span<const double> deviation, double alpha);

}  // namespace wckp
