#pragma once

// Linearization of the Tsallis distance: for which g does ∫g dν ≤ T_α(ν‖μ) hold
// for every ν? The answer runs through the root c of ∫(g−c)₊^{β−1} dμ = β^{β−1}
// and the explicit maximizer f = β^{1−β}(g−c)₊^{β−1} of
//     R f = ∫fg dμ − T_α(ν‖μ).
// maximize_r() solves the same concave problem by projected ascent and never
// touches the root equation, so the two routes can be compared.

#include <utility>

#include "wckp/measure.hpp"

namespace wckp {

struct DominationCertificate {
  double c = 0.0;              // root of the normalization equation
  double lhs_42 = 0.0;         // ∫(g−c)₊^β dμ
  double rhs_42 = 0.0;         // −β^β(c + β − 1)
  double margin = 0.0;         // (rhs_42 − lhs_42)/β^β, computed without forming β^β
  bool dominated = false;      // margin ≥ −1e-10
  Density extremizer;
  double r_at_extremizer = 0.0;       // equals −margin
  double normalization_error = 0.0;   // |∫ f dμ − 1| before renormalizing f
  double root_residual = 0.0;         // |φ(c)/β^{β−1} − 1|
};

/// φ(c) = ∫(g−c)₊^{β−1} dμ.
double phi(const Space& space, const RealFunction& g, double beta, double c);

/// Unique c with φ(c) = β^{β−1}, by bisection. Throws NoConvergence.
double solve_c(const Space& space, const RealFunction& g, const Order& order);

/// Fills the full certificate, including the extremal density.
DominationCertificate dominated(const Space& space, const RealFunction& g, const Order& order);

/// β^{1−β}(g−c)₊^{β−1} at the root c.
Density extremizer(const Space& space, const RealFunction& g, const Order& order);

/// R f = ∫fg dμ − T_α.
double r_functional(const Space& space, const RealFunction& g, const Order& order, const Density& f);

struct OracleResult {
  Density density;
  double value = 0.0;
  int iterations = 0;
  double stationarity = 0.0;  // ‖f − P(f + ∇R)‖_∞ at exit
};

/// Scaled projected-gradient ascent of R over {f ≥ 0, ∫f dμ = 1}, started at f ≡ 1.
/// Throws OracleNotConverged if the projected-gradient norm stays ≥ 1e-9.
OracleResult maximize_r(const Space& space, const RealFunction& g, const Order& order);

struct QConstantBounds {
  double lower = 0.0;  // ‖g‖_β/(eα)
  double upper = 0.0;  // ‖g‖_β
  double k_est = 0.0;  // sup_f ∫fg dμ / ∫f^α dμ, searched numerically
};

/// Requires g ≥ 0 (NegativeG otherwise).
QConstantBounds q_constant_bounds(const Space& space, const RealFunction& g, const Order& order);

/// ∫(1 + g/β)₊^β dμ ≤ 1.
bool sufficient_condition(const Space& space, const RealFunction& g, const Order& order);
double sufficient_condition_lhs(const Space& space, const RealFunction& g, const Order& order);

struct NecessaryConditions {
  bool mean_ok = false;     // ∫g dμ ≤ 0
  bool cond_82_ok = false;  // ∫(1 + g/(β−1))₊^{β−1} dμ ≤ 1
  bool cond_72_ok = false;  // ∫(1 + (α−1)g)₊^β dμ ≤ (eα)^β
  double mean = 0.0;
  double lhs_82 = 0.0;
  double lhs_72 = 0.0;
  double rhs_72 = 0.0;
};

NecessaryConditions necessary_conditions(const Space& space, const RealFunction& g, const Order& order);

struct CBoundsReport {
  bool ok = false;
  double c_upper = 0.0;        // −β
  double c_lower = 0.0;        // −β + ∫g (α ≤ 2) or −4 + α∫g (α ≥ 2)
  double moment_lhs = 0.0;     // ∫g₊^β dμ
  double moment_rhs = 0.0;     // β^β(1 − ∫g) or β^β(4 − α∫g)
};

/// Location of c and the one-sided moment bound for a dominated g.
/// Throws NotDominated when cert.dominated is false.
CBoundsReport c_bounds(const DominationCertificate& cert, const Space& space, const RealFunction& g,
                       const Order& order);
bool c_bounds_check(const DominationCertificate& cert, const Space& space, const RealFunction& g,
                    const Order& order);

/// Scaled form of the domination inequality at an arbitrary c':
/// ∫((g−c')/β)₊^β dμ + c' + β − 1, which is ≤ 0 exactly when the inequality holds at c'.
double domination_gap_at(const Space& space, const RealFunction& g, const Order& order, double c);

}  // namespace wckp
