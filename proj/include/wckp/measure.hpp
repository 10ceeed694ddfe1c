#pragma once

// Finite probability spaces and the per-atom functions living on them.
//
// All objects are immutable values; operations are pure functions.

#include <cstddef>
#include <span>
#include <vector>

namespace wckp {

/// Pairwise (tree) summation; result is stable under permutation to ~1e-16 relative.
double pairwise_sum(std::span<const double> xs);

/// A probability measure on n atoms, every atom carrying strictly positive mass.
class Space {
 public:
  std::size_t size() const noexcept { return weights_.size(); }
  std::span<const double> weights() const noexcept { return weights_; }
  double weight(std::size_t i) const { return weights_[i]; }

  /// Σᵢ μᵢ hᵢ with pairwise summation.
  double integrate(std::span<const double> h) const;

  template <class Fn>
  double integrate_by(Fn&& fn) const {
    std::vector<double> terms(weights_.size());
    for (std::size_t i = 0; i < weights_.size(); ++i) terms[i] = weights_[i] * fn(i);
    return pairwise_sum(terms);
  }

 private:
  friend Space make_space(std::span<const double> weights);
  explicit Space(std::vector<double> w) : weights_(std::move(w)) {}
  std::vector<double> weights_;
};

/// Accepts weights summing to 1 within 1e-9 and renormalizes them by their sum.
/// Throws EmptySpace, NonFiniteValue, NonpositiveWeight, BadNormalization.
Space make_space(std::span<const double> weights);
inline Space make_space(const std::vector<double>& weights) {
  return make_space(std::span<const double>(weights));
}

/// Real values indexed by atom (a test function g, u or a weight w).
class RealFunction {
 public:
  RealFunction() = default;
  explicit RealFunction(std::vector<double> values);

  std::size_t size() const noexcept { return values_.size(); }
  std::span<const double> values() const noexcept { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }

 private:
  std::vector<double> values_;
};

/// Radon-Nikodym values f = dν/dμ: nonnegative, μ-mean one.
class Density {
 public:
  std::size_t size() const noexcept { return values_.size(); }
  std::span<const double> values() const noexcept { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }

  /// ν-mass of every atom, μᵢ fᵢ.
  std::vector<double> masses(const Space& space) const;

 private:
  friend Density make_density(const Space&, std::span<const double>, double);
  explicit Density(std::vector<double> v) : values_(std::move(v)) {}
  std::vector<double> values_;
};

/// Validates nonnegativity and Σμf = 1 within `tolerance` (default 1e-9), then
/// divides by Σμf so the stored density has mean one to rounding.
Density make_density(const Space& space, std::span<const double> values,
                     double tolerance = 1e-9);
inline Density make_density(const Space& space, const std::vector<double>& values,
                            double tolerance = 1e-9) {
  return make_density(space, std::span<const double>(values), tolerance);
}

/// Density of the measure with atom masses ν (must sum to one within 1e-9).
Density density_from_masses(const Space& space, std::span<const double> masses);

/// f ≡ 1, i.e. ν = μ.
Density uniform_density(const Space& space);

/// Rényi order α in (1, 50] together with its conjugate exponents.
struct Order {
  double alpha;
  double beta;       // α/(α−1)
  double beta_star;  // max(β, 2)
};

/// Throws BadOrder outside (1, 50].
Order make_order(double alpha);

/// (Σ μᵢ |hᵢ|^p)^{1/p}; BadExponent for p < 1.
double lp_norm(const Space& space, std::span<const double> h, double p);
inline double lp_norm(const Space& space, const RealFunction& h, double p) {
  return lp_norm(space, h.values(), p);
}

/// ∫h dμ.
double mean(const Space& space, const RealFunction& h);

/// h − ∫h dμ.
RealFunction center(const Space& space, const RealFunction& u);

}  // namespace wckp
