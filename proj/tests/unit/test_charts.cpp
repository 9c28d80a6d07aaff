#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "ellscope/charts.hpp"
#include "ellscope/criteria.hpp"

using namespace ellscope;
using std::numbers::pi;
using std::numbers::sqrt2;

namespace {

const double e = std::numbers::e;

std::vector<double> sorted(const Stretches& s) {
  std::vector<double> v(s.values().begin(), s.values().end());
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace

TEST(AbChart, Examples) {
  const Stretches s0 = ab_to_stretches(0, 0);
  EXPECT_EQ(s0[0], 1.0);
  EXPECT_EQ(s0[1], 1.0);
  EXPECT_EQ(s0[2], 1.0);
  const Stretches s1 = ab_to_stretches(1, 0);
  EXPECT_NEAR(s1[0], e, 1e-15);
  EXPECT_EQ(s1[2], 1.0);
  const Stretches s2 = ab_to_stretches(1, 1);
  EXPECT_NEAR(std::log(s2[0] / s2[1]), 1.0, 1e-15);
  EXPECT_NEAR(std::log(s2[1] / s2[2]), 1.0, 1e-15);
  EXPECT_EQ(s2[1], 1.0);
}

TEST(PThetaChart, Examples) {
  const auto [a0, b0] = ptheta_to_ab(0.0, 1.234);
  EXPECT_EQ(a0, 0.0);
  EXPECT_EQ(b0, 0.0);
  const auto [a1, b1] = ptheta_to_ab(sqrt2, pi / 2);
  EXPECT_NEAR(a1, 1 / std::sqrt(3.0), 1e-15);
  EXPECT_NEAR(b1, 1 / std::sqrt(3.0), 1e-15);
  EXPECT_NEAR(a1 * a1 + b1 * b1 + a1 * b1, 1.0, 1e-15);
  const auto [a2, b2] = ptheta_to_ab(sqrt2, pi);
  EXPECT_NEAR(a2, -1.0, 1e-15);
  EXPECT_NEAR(b2, 1.0, 1e-15);
  EXPECT_NEAR(a2 - b2, sqrt2 * sqrt2 * std::cos(pi), 1e-15);
  EXPECT_THROW(ptheta_to_ab(-0.1, 0.0), std::invalid_argument);
}

TEST(PThetaChart, RadiusIdentity) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> pd(0.0, 3.0), td(0.0, 2 * pi);
  for (int k = 0; k < 10000; ++k) {
    const double p = pd(rng), th = td(rng);
    const auto [a, b] = ptheta_to_ab(p, th);
    EXPECT_NEAR(2 * (a * a + b * b + a * b), p * p, 1e-13);
  }
}

TEST(Ellipse, Membership) {
  EXPECT_EQ(ellipse_membership(0, 0).membership, Membership::inside);
  EXPECT_EQ(ellipse_membership(0, 0).margin, 1.0);
  EXPECT_EQ(ellipse_membership(1, 0).membership, Membership::boundary);
  EXPECT_EQ(ellipse_membership(1, 0).margin, 0.0);
  EXPECT_EQ(ellipse_membership(1, 1).membership, Membership::outside);
  EXPECT_EQ(ellipse_membership(1, 1).margin, -2.0);
  EXPECT_STREQ(to_string(Membership::boundary), "boundary");
}

TEST(Ellipse, InvariantFromAb) {
  EXPECT_NEAR(dev3_invariant_from_ab(1, 0), 2.0 / 3.0, 1e-15);
  EXPECT_EQ(dev3_invariant_from_ab(0, 0), 0.0);
  for (double th : {0.0, 0.7, 2.0, 4.4}) {
    const auto [a, b] = ptheta_to_ab(1.0, th);
    EXPECT_NEAR(dev3_invariant_from_ab(a, b), 1.0 / 3.0, 1e-15);
  }
}

TEST(Ellipse, InvariantRoundTripOnGrid) {
  for (int i = 0; i < 100; ++i) {
    for (int j = 0; j < 100; ++j) {
      const double a = -2.0 + 4.0 * i / 99, b = -2.0 + 4.0 * j / 99;
      EXPECT_NEAR(dev_log_norm_sq(ab_to_stretches(a, b)), dev3_invariant_from_ab(a, b), 1e-14);
    }
  }
}

TEST(LogtChart, Examples) {
  const Stretches s0 = logt_to_stretches_2d(0);
  EXPECT_EQ(s0[0], 1.0);
  EXPECT_EQ(s0[1], 1.0);
  EXPECT_NEAR(logt_to_stretches_2d(1)[0], e, 1e-15);
  EXPECT_NEAR(logt_to_stretches_2d(-1)[0], 1 / e, 1e-15);
  EXPECT_EQ(logt_to_stretches_2d(-1).dim(), 2);
}

TEST(Cone, Examples) {
  for (double th : {0.0, 1.0, 5.0}) {
    const Stretches s = cone_point(th, 1.0, 0.0);
    for (int i = 0; i < 3; ++i) EXPECT_EQ(s[i], 1.0);
  }
  const Stretches s1 = cone_point(pi / 2, 1.0, sqrt2);
  EXPECT_NEAR(s1[0], std::exp(1 / std::sqrt(3.0)), 1e-15);
  EXPECT_EQ(s1[1], 1.0);
  EXPECT_NEAR(s1[2], std::exp(-1 / std::sqrt(3.0)), 1e-15);
  EXPECT_NEAR(dev_log_norm_sq(s1), 2.0 / 3.0, 1e-12);
  const Stretches s2 = cone_point(0.0, 2.0, 1.0);
  EXPECT_NEAR(s2[0], 2 * std::exp(1 / sqrt2), 1e-14);
  EXPECT_EQ(s2[1], 2.0);
  EXPECT_NEAR(s2[2], 2 * std::exp(1 / sqrt2), 1e-14);
  EXPECT_NEAR(dev_log_norm_sq(s2), 1.0 / 3.0, 1e-12);
  EXPECT_THROW(cone_point(0.0, 0.0, 1.0), std::invalid_argument);
  EXPECT_THROW(cone_point(0.0, -1.0, 1.0), std::invalid_argument);
}

TEST(Cone, AgreesWithAbChainAndInvariant) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> pd(0.0, sqrt2), td(0.0, 2 * pi), ud(0.1, 10.0);
  for (int k = 0; k < 1000; ++k) {
    const double p = pd(rng), th = td(rng), u = ud(rng);
    const Stretches c = cone_point(th, u, p);
    const auto [a, b] = ptheta_to_ab(p, th);
    const Stretches s = ab_to_stretches(a, b).scaled(u);
    for (int i = 0; i < 3; ++i) EXPECT_NEAR(c[i], s[i], 1e-13 * s[i]);
    EXPECT_NEAR(dev_log_norm_sq(c), p * p / 3, 1e-12);
  }
}

TEST(ChartPoint, ToStretches) {
  EXPECT_NEAR((ChartPoint{Chart::ab, {1.0, 0.0}}.to_stretches()[0]), e, 1e-15);
  EXPECT_EQ((ChartPoint{Chart::logt2d, {0.0, 0.0}}.to_stretches().dim()), 2);
  EXPECT_NEAR((ChartPoint{Chart::cone, {0.0, 1.0}}.to_stretches(2.0)[1]), 2.0, 0.0);
  EXPECT_THROW((ChartPoint{Chart::ptheta, {-1.0, 0.0}}.to_stretches()), std::invalid_argument);
}

TEST(ChartNames, ParseAndArity) {
  for (Chart c : {Chart::ab, Chart::ptheta, Chart::logt2d, Chart::cone}) {
    EXPECT_EQ(parse_chart(to_string(c)), c);
  }
  EXPECT_FALSE(parse_chart("polar").has_value());
  EXPECT_EQ(chart_arity(Chart::logt2d), 1);
  EXPECT_EQ(chart_arity(Chart::ab), 2);
  EXPECT_EQ(chart_stretch_dim(Chart::logt2d), 2);
  EXPECT_EQ(chart_stretch_dim(Chart::cone), 3);
}

TEST(Symmetries, SwapImagesArePermutationsUpToScale) {
  std::mt19937_64 rng(10);
  std::uniform_real_distribution<double> d(-2.0, 2.0);
  for (int k = 0; k < 200; ++k) {
    const double a = d(rng), b = d(rng);
    const Stretches s = ab_to_stretches(a, b);
    for (const auto& [a2, b2] : stretch_swap_images(a, b)) {
      // Compare the multisets of log-ratios to the middle stretch-free form:
      // sorted logs shifted so their mean is zero.
      auto centered = [](const Stretches& x) {
        auto v = sorted(x);
        double m = 0;
        for (double& q : v) m += std::log(q) / 3;
        for (double& q : v) q = std::log(q) - m;
        return v;
      };
      const auto lhs = centered(s), rhs = centered(ab_to_stretches(a2, b2));
      for (int i = 0; i < 3; ++i) EXPECT_NEAR(lhs[i], rhs[i], 1e-13);
    }
  }
}

TEST(Symmetries, EllipseSetInvariantUnderAllThreeMaps) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> d(-2.0, 2.0);
  for (int k = 0; k < 1000; ++k) {
    const double a = d(rng), b = d(rng);
    const auto m = ellipse_membership(a, b);
    for (const auto& [a2, b2] : ellipse_symmetry_images(a, b)) {
      EXPECT_EQ(ellipse_membership(a2, b2).membership, m.membership);
      EXPECT_NEAR(ellipse_membership(a2, b2).margin, m.margin, 1e-14);
    }
  }
}

TEST(Symmetries, VerdictsInvariantUnderStretchSwaps) {
  const auto spec = make_builtin("dev-hencky", {{"n", 3}});
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> d(-2.0, 2.0);
  for (int k = 0; k < 500; ++k) {
    const double a = d(rng), b = d(rng);
    const auto v = check_point(spec, ab_to_stretches(a, b));
    for (const auto& [a2, b2] : stretch_swap_images(a, b)) {
      const auto w = check_point(spec, ab_to_stretches(a2, b2));
      EXPECT_EQ(w.status, v.status);
      EXPECT_NEAR(w.worst.margin, v.worst.margin, 1e-10 * (1 + std::abs(v.worst.margin)));
    }
  }
}

TEST(Symmetries, TransposedAbIsNotAStretchPermutation) {
  // (a, b) -> (b, a) preserves the ellipse but not the stretch multiset.
  const Stretches s = ab_to_stretches(1.0, 0.2);
  const Stretches t = ab_to_stretches(0.2, 1.0);
  EXPECT_NEAR(dev_log_norm_sq(s), dev_log_norm_sq(t), 1e-14);
  const auto sv = sorted(s), tv = sorted(t);
  EXPECT_GT(std::abs(std::log(sv[2] / sv[1]) - std::log(tv[2] / tv[1])), 0.1);
}
