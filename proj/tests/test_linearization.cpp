#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "wckp/divergences.hpp"
#include "wckp/error.hpp"
#include "wckp/instance.hpp"
#include "wckp/linearization.hpp"
#include "wckp/measure.hpp"

using namespace wckp;

namespace {

const Space& two_point() {
  static const Space s = make_space({0.5, 0.5});
  return s;
}

const std::vector<double> kAlphas{1.2, 1.5, 2.0, 3.0, 6.0};
const std::vector<std::string> kProfiles{"dirichlet", "sparse", "near-mu", "euclidean", "graph"};

Instance random_instance(std::uint64_t seed) {
  return generate(seed, 2 + seed % 11, kProfiles[seed % 5], kAlphas[(seed / 5) % 5]);
}

}  // namespace

TEST(Phi, SmallExamples) {
  const Space& s = two_point();
  EXPECT_DOUBLE_EQ(phi(s, RealFunction({0, 0}), 2.0, -2.0), 2.0);
  EXPECT_DOUBLE_EQ(phi(s, RealFunction({1, -1}), 2.0, -2.0), 2.0);
  EXPECT_EQ(phi(s, RealFunction({1, -1}), 2.0, 1.0), 0.0);
  EXPECT_EQ(phi(s, RealFunction({1, -1}), 3.0, 5.0), 0.0);
}

TEST(Phi, NonincreasingAndConvexInC) {
  const Space s = make_space({0.2, 0.3, 0.5});
  const RealFunction g({1.0, -0.5, 0.3});
  for (double beta : {1.5, 2.0, 3.0, 6.0}) {
    double prev = phi(s, g, beta, -10.0), prev_slope = -INFINITY;
    for (double c = -9.9; c < 1.5; c += 0.1) {
      const double v = phi(s, g, beta, c);
      EXPECT_LE(v, prev + 1e-12);
      const double slope = (v - prev) / 0.1;
      if (beta >= 2.0) {
        EXPECT_GE(slope, prev_slope - 1e-9);
      }
      prev_slope = slope;
      prev = v;
    }
  }
}

TEST(SolveC, ConstantFunctionClosedForm) {
  const Space s = make_space({0.1, 0.2, 0.7});
  for (double a : kAlphas) {
    const Order o = make_order(a);
    for (double g0 : {-3.0, -1.0, 0.0, 1.0, 250.0}) {
      EXPECT_NEAR(solve_c(s, RealFunction({g0, g0, g0}), o), g0 - o.beta, 1e-10 * std::max(1.0, std::abs(g0)));
    }
  }
  EXPECT_NEAR(solve_c(two_point(), RealFunction({1, -1}), make_order(2)), -2.0, 1e-12);
}

TEST(SolveC, RootResidualOnRandomInstances) {
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    const Instance inst = random_instance(seed);
    const Order o = make_order(inst.alpha);
    const double c = solve_c(inst.space, *inst.g, o);
    // φ(c)/β^{β−1} = ∫((g−c)/β)₊^{β−1} dμ, compared in the scaled form.
    const double scaled = inst.space.integrate_by([&](std::size_t i) {
      const double t = ((*inst.g)[i] - c) / o.beta;
      return t > 0 ? std::pow(t, o.beta - 1) : 0.0;
    });
    EXPECT_NEAR(scaled, 1.0, 1e-9) << "seed " << seed;
  }
}

TEST(Dominated, SmallExamples) {
  const Space& s = two_point();
  const Order two = make_order(2);
  const auto zero = dominated(s, RealFunction({0, 0}), two);
  EXPECT_TRUE(zero.dominated);
  EXPECT_NEAR(zero.lhs_42, 4.0, 1e-12);
  EXPECT_NEAR(zero.rhs_42, 4.0, 1e-12);

  const auto witness = dominated(s, RealFunction({1, -1}), two);
  EXPECT_FALSE(witness.dominated);
  EXPECT_NEAR(witness.lhs_42, 5.0, 1e-12);
  EXPECT_NEAR(witness.rhs_42, 4.0, 1e-12);
  // ν with f = (1.8, 0.2): ∫g dν = 0.8 exceeds T_2 = 0.64.
  const Density f = make_density(s, {1.8, 0.2});
  EXPECT_NEAR(0.5 * 1.8 - 0.5 * 0.2, 0.8, 1e-15);
  EXPECT_NEAR(tsallis(s, f, two), 0.64, 1e-12);

  EXPECT_FALSE(dominated(s, RealFunction({1, 1}), two).dominated);
}

TEST(Dominated, ConstantFunctionsDominatedExactlyWhenNonpositive) {
  const Space s = make_space({0.25, 0.25, 0.5});
  for (double a : kAlphas) {
    const Order o = make_order(a);
    for (double t : {-5.0, -0.3, -1e-6, 0.0, 1e-6, 0.4, 3.0}) {
      EXPECT_EQ(dominated(s, RealFunction({t, t, t}), o).dominated, t <= 0.0) << "alpha " << a << " t " << t;
    }
  }
}

TEST(Extremizer, SmallExamples) {
  const Space& s = two_point();
  const Order two = make_order(2);
  const Density f = extremizer(s, RealFunction({1, -1}), two);
  EXPECT_NEAR(f[0], 1.5, 1e-12);
  EXPECT_NEAR(f[1], 0.5, 1e-12);
  for (double a : kAlphas) {
    const Density c = extremizer(make_space({0.3, 0.7}), RealFunction({-2.0, -2.0}), make_order(a));
    EXPECT_NEAR(c[0], 1.0, 1e-12);
    EXPECT_NEAR(c[1], 1.0, 1e-12);
  }
}

TEST(Extremizer, NormalizedAndMatchesCertificate) {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    const Instance inst = random_instance(seed);
    const Order o = make_order(inst.alpha);
    const auto cert = dominated(inst.space, *inst.g, o);
    EXPECT_LE(cert.normalization_error, 1e-9) << "seed " << seed;
    EXPECT_NEAR(inst.space.integrate(cert.extremizer.values()), 1.0, 1e-12);
    EXPECT_NEAR(cert.r_at_extremizer, -cert.margin, 1e-9 * std::max(1.0, std::abs(cert.margin)));
  }
}

TEST(RFunctional, SmallExamples) {
  const Space& s = two_point();
  const Order two = make_order(2);
  EXPECT_NEAR(r_functional(s, RealFunction({1, -1}), two, make_density(s, {1.5, 0.5})), 0.25, 1e-15);
  EXPECT_NEAR(r_functional(s, RealFunction({3, 1}), two, uniform_density(s)), 2.0, 1e-15);
  const Density f = make_density(s, {1.2, 0.8});
  EXPECT_NEAR(r_functional(s, RealFunction({0, 0}), make_order(3), f), -tsallis(s, f, make_order(3)), 1e-15);
}

TEST(MaximizeR, SmallExamples) {
  const Space& s = two_point();
  const Order two = make_order(2);
  const auto zero = maximize_r(s, RealFunction({0, 0}), two);
  EXPECT_NEAR(zero.value, 0.0, 1e-9);
  EXPECT_NEAR(zero.density[0], 1.0, 1e-6);
  const auto w = maximize_r(s, RealFunction({1, -1}), two);
  EXPECT_NEAR(w.value, 0.25, 1e-9);
  EXPECT_NEAR(w.density[0], 1.5, 1e-6);
  EXPECT_NEAR(maximize_r(s, RealFunction({1, 1}), two).value, 1.0, 1e-9);
}

TEST(MaximizeR, AgreesWithClosedFormRoute) {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    const Instance inst = random_instance(seed);
    const Order o = make_order(inst.alpha);
    const auto cert = dominated(inst.space, *inst.g, o);
    const auto oracle = maximize_r(inst.space, *inst.g, o);
    const double r_ext = r_functional(inst.space, *inst.g, o, cert.extremizer);
    EXPECT_NEAR(r_ext, oracle.value, 1e-6) << "seed " << seed;
    EXPECT_GE(r_ext, oracle.value - 1e-9) << "the closed form is the maximizer";
    EXPECT_EQ(cert.dominated, oracle.value <= 1e-6) << "seed " << seed;
  }
}

TEST(Domination, GridOfRootsConsistent) {
  // Any c' with the inequality holding forces domination.
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const Instance inst = random_instance(seed);
    const Order o = make_order(inst.alpha);
    const auto g = inst.g->values();
    const double lo = *std::min_element(g.begin(), g.end()) - 3 * o.beta;
    const double hi = *std::max_element(g.begin(), g.end());
    bool some = false;
    for (int k = 0; k < 1000; ++k) some = some || domination_gap_at(inst.space, *inst.g, o, lo + (hi - lo) * k / 999.0) <= 0.0;
    if (some) {
      EXPECT_TRUE(dominated(inst.space, *inst.g, o).dominated) << "seed " << seed;
    }
  }
}

TEST(Conditions, SmallExamples) {
  const Space& s = two_point();
  const Order two = make_order(2);
  EXPECT_TRUE(sufficient_condition(s, RealFunction({0, 0}), two));
  EXPECT_FALSE(sufficient_condition(s, RealFunction({1, 1}), two));
  EXPECT_TRUE(sufficient_condition(s, RealFunction({-2, -2}), two));
  EXPECT_EQ(sufficient_condition_lhs(s, RealFunction({-2, -2}), two), 0.0);

  const auto zero = necessary_conditions(s, RealFunction({0, 0}), two);
  EXPECT_TRUE(zero.mean_ok && zero.cond_82_ok && zero.cond_72_ok);
  const auto one = necessary_conditions(s, RealFunction({1, 1}), two);
  EXPECT_FALSE(one.mean_ok);
  EXPECT_FALSE(one.cond_82_ok);
  EXPECT_TRUE(one.cond_72_ok);
}

TEST(Conditions, NecessaryButNotSufficientWitness) {
  // g = (1,−1) passes every necessary test yet is not dominated.
  const Space& s = two_point();
  const Order two = make_order(2);
  const RealFunction g({1, -1});
  const auto nc = necessary_conditions(s, g, two);
  EXPECT_TRUE(nc.mean_ok);
  EXPECT_NEAR(nc.lhs_82, 1.0, 1e-15);
  EXPECT_TRUE(nc.cond_82_ok);
  EXPECT_TRUE(nc.cond_72_ok);
  EXPECT_FALSE(dominated(s, g, two).dominated);
}

TEST(Conditions, DominatedButNotSufficientWitness) {
  // The sufficient test is strictly one-way: g = (1, −1) − s is dominated for
  // s ≥ 1/4 but only passes the sufficient test from s ≈ 0.28 on.
  const Space& s = two_point();
  const Order two = make_order(2);
  const RealFunction g({0.74, -1.26});
  EXPECT_TRUE(dominated(s, g, two).dominated);
  EXPECT_FALSE(sufficient_condition(s, g, two));
}

TEST(Conditions, ImplicationChainOnRandomInstances) {
  int sufficient = 0, dom = 0;
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    const Instance inst = random_instance(seed);
    const Order o = make_order(inst.alpha);
    const bool d = dominated(inst.space, *inst.g, o).dominated;
    if (sufficient_condition(inst.space, *inst.g, o)) {
      ++sufficient;
      EXPECT_TRUE(d) << "seed " << seed;
    }
    if (d) {
      ++dom;
      const auto nc = necessary_conditions(inst.space, *inst.g, o);
      EXPECT_TRUE(nc.mean_ok && nc.cond_82_ok && nc.cond_72_ok) << "seed " << seed;
    }
  }
  EXPECT_GT(sufficient, 0);
  EXPECT_GT(dom, sufficient);
}

TEST(CBounds, SmallExamples) {
  const Space& s = two_point();
  const Order two = make_order(2);
  const auto z = dominated(s, RealFunction({0, 0}), two);
  const auto rz = c_bounds(z, s, RealFunction({0, 0}), two);
  EXPECT_TRUE(rz.ok);
  EXPECT_NEAR(z.c, -2.0, 1e-12);

  const RealFunction m1({-1, -1});
  const auto c1 = dominated(s, m1, two);
  EXPECT_NEAR(c1.c, -3.0, 1e-12);
  EXPECT_TRUE(c_bounds_check(c1, s, m1, two));

  const Order o = make_order(1.5);
  const RealFunction m3({-3, -3});
  const auto c3 = dominated(s, m3, o);
  EXPECT_NEAR(c3.c, -6.0, 1e-12);
  EXPECT_TRUE(c_bounds_check(c3, s, m3, o));

  try {
    c_bounds(dominated(s, RealFunction({1, -1}), two), s, RealFunction({1, -1}), two);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotDominated);
  }
}

TEST(CBounds, HoldOnDominatedRandomInstances) {
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    const Instance inst = random_instance(seed);
    const Order o = make_order(inst.alpha);
    const auto cert = dominated(inst.space, *inst.g, o);
    if (cert.dominated) {
      EXPECT_TRUE(c_bounds_check(cert, inst.space, *inst.g, o)) << "seed " << seed;
    }
  }
}

TEST(QConstant, SmallExamples) {
  const Space& s = two_point();
  const Order two = make_order(2);
  const auto one = q_constant_bounds(s, RealFunction({1, 1}), two);
  EXPECT_NEAR(one.lower, 1.0 / (2.0 * std::numbers::e), 1e-15);
  EXPECT_NEAR(one.upper, 1.0, 1e-15);
  EXPECT_NEAR(one.k_est, 1.0, 1e-9);

  const auto zero = q_constant_bounds(s, RealFunction({0, 0}), two);
  EXPECT_EQ(zero.lower, 0.0);
  EXPECT_EQ(zero.upper, 0.0);
  EXPECT_EQ(zero.k_est, 0.0);

  // g = (2, 0): brute force over ν = (t, 1−t), f = (2t, 2(1−t)).
  const auto b = q_constant_bounds(s, RealFunction({2, 0}), two);
  double grid = 0.0;
  for (int k = 0; k <= 1000000; ++k) {
    const double t = k / 1e6;
    grid = std::max(grid, (t * 2.0) / (0.5 * (4 * t * t + 4 * (1 - t) * (1 - t))));
  }
  EXPECT_NEAR(b.k_est, grid, 1e-6);
  EXPECT_GE(b.k_est, std::sqrt(2.0) / (2 * std::numbers::e));
  EXPECT_LE(b.k_est, std::sqrt(2.0) + 1e-12);

  try {
    q_constant_bounds(s, RealFunction({1, -1}), two);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NegativeG);
  }
}

TEST(QConstant, EstimateInsideBoundsOnRandomInstances) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    Instance inst = random_instance(seed);
    std::vector<double> g(inst.g->values().begin(), inst.g->values().end());
    for (double& x : g) x = std::abs(x);
    const auto q = q_constant_bounds(inst.space, RealFunction(g), make_order(inst.alpha));
    EXPECT_GE(q.k_est, q.lower - 1e-9 * q.upper) << "seed " << seed;
    EXPECT_LE(q.k_est, q.upper * (1 + 1e-9)) << "seed " << seed;
  }
}

TEST(Linearization, RejectsSizeMismatch) {
  try {
    solve_c(two_point(), RealFunction({1, 2, 3}), make_order(2));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::SizeMismatch);
  }
}
