#pragma once

#include <vector>

#include "wckp/check_report.hpp"
#include "wckp/measure.hpp"

namespace wckp {

/// Finite metric space: a Space, a distance matrix and a base point x₀.
class MetricSpace {
 public:
  const Space& space() const noexcept { return space_; }
  std::size_t size() const noexcept { return space_.size(); }
  double distance(std::size_t i, std::size_t j) const { return dist_[i][j]; }
  const std::vector<std::vector<double>>& distances() const noexcept { return dist_; }
  std::size_t base_index() const noexcept { return base_; }

 private:
  friend MetricSpace make_metric_space(Space, std::vector<std::vector<double>>, std::size_t);
  MetricSpace(Space s, std::vector<std::vector<double>> d, std::size_t b)
      : space_(std::move(s)), dist_(std::move(d)), base_(b) {}
  Space space_;
  std::vector<std::vector<double>> dist_;
  std::size_t base_;
};

/// Validates shape, symmetry, zero diagonal, nonnegativity and the triangle
/// inequality (slack 1e-9). Throws BadMetric.
MetricSpace make_metric_space(Space space, std::vector<std::vector<double>> dist, std::size_t base);

/// All-pairs shortest-path closure of a symmetric nonnegative matrix.
std::vector<std::vector<double>> shortest_path_closure(std::vector<std::vector<double>> dist);

struct TransportPlan {
  std::vector<std::vector<double>> pi;  // row i sums to μᵢ, column j to νⱼ
  double cost = 0.0;                    // Σ πᵢⱼ dᵢⱼ^p
};

struct WassersteinResult {
  double value = 0.0;  // W_p = cost^{1/p}
  TransportPlan plan;
  // Dual potentials: row_potential[i] + col_potential[j] ≤ dᵢⱼ^p, with equality where πᵢⱼ > 0.
  std::vector<double> row_potential;
  std::vector<double> col_potential;
};

/// Exact W_p(μ, ν) by successive shortest paths on the transportation graph.
/// Throws BadExponent (p < 1), SolverFailure.
WassersteinResult wasserstein(const MetricSpace& ms, const Density& f, double p);

/// Largest dual-slack violation and complementary-slackness gap of a solution.
struct DualCertificate {
  double max_violation = 0.0;  // max(0, aᵢ + bⱼ − dᵢⱼ^p)
  double max_cs_gap = 0.0;     // max |aᵢ + bⱼ − dᵢⱼ^p| over the support of π
  double dual_value = 0.0;     // Σ μᵢ aᵢ + Σ νⱼ bⱼ
};
DualCertificate verify_duals(const MetricSpace& ms, const Density& f, double p, const WassersteinResult& r);

/// For p = 1: the c-transform φ(xᵢ) = minⱼ(dᵢⱼ − bⱼ) of the column potentials,
/// a 1-Lipschitz function with ∫φ dμ − ∫φ dν = W₁.
std::vector<double> kantorovich_potential(const MetricSpace& ms, const WassersteinResult& r);

/// (∫ ρ(x, x₀)^p dμ)^{1/p}.
double m_p_moment(const MetricSpace& ms, double p);

/// W_p^p ≤ 2^{p−1} ∫ ρ(x,x₀)^p |f−1| dμ.
CheckReport check_tv_bound_3_5(const MetricSpace& ms, const Density& f, double p);

/// Transport-entropy bounds for W_p in terms of T_α: the two order regimes of
/// the weighted-TV route and the √T_α route. Reports of the regime that does not
/// apply to α are vacuous.
std::vector<CheckReport> check_corollaries_3(const MetricSpace& ms, const Density& f, const Order& order,
                                             double p);

}  // namespace wckp
