#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "ellscope/appendix.hpp"
#include "ellscope/charts.hpp"
#include "ellscope/criteria.hpp"

using namespace ellscope;
namespace ap = ellscope::appendix;
using std::numbers::pi;
using std::numbers::sqrt2;
using std::numbers::sqrt3;

TEST(EvalF, Examples) {
  for (double th : {0.0, 1.0, pi, 5.0}) EXPECT_EQ(ap::eval_f(1, 0.0, th), 2.0);
  EXPECT_NEAR(ap::eval_f(1, sqrt2, pi), 0.0, 1e-15);
  const double x = 2.0 / sqrt3;
  const double expected = 0.5 - 1.0 + sqrt3 * (std::exp(x) + 1) / (std::exp(x) - 1);
  EXPECT_NEAR(ap::eval_f(3, sqrt2, pi / 2), expected, 1e-14);
  EXPECT_NEAR(ap::eval_f(3, sqrt2, pi / 2), 2.8261535, 1e-7);
}

TEST(EvalF, DomainErrors) {
  EXPECT_THROW(ap::eval_f(1, -0.1, 0.0), std::domain_error);
  EXPECT_THROW(ap::eval_f(2, 1.5, 0.0), std::domain_error);
  EXPECT_THROW(ap::eval_f(2, 1.0, 2 * pi), std::domain_error);
  EXPECT_THROW(ap::eval_f(2, 1.0, -0.1), std::domain_error);
  EXPECT_THROW(ap::eval_f(4, 1.0, 1.0), std::invalid_argument);
}

TEST(EvalF, F3RemovableSingularity) {
  EXPECT_THROW(ap::eval_f(3, 1.0, pi), std::domain_error);
  EXPECT_THROW(ap::eval_f(3, 1.0, 0.0), std::domain_error);
  EXPECT_THROW(ap::eval_f(3, 0.0, 1.0), std::domain_error);
  for (double p : {0.3, 1.0, sqrt2}) {
    for (double th : {0.0, pi}) {
      const double lim = ap::eval_f(3, p, th, true);
      EXPECT_TRUE(std::isfinite(lim));
      const double side = th == 0.0 ? 1e-7 : pi - 1e-7;
      EXPECT_NEAR(ap::eval_f(3, p, side), lim, 1e-6) << p << ' ' << th;
    }
  }
  EXPECT_NEAR(ap::eval_f(3, 0.0, 1.0, true), 0.5 * 2.0 - 1.0 + 3.0, 1e-15);
}

TEST(EvalF, F3SmoothAcrossStableFormSwitch) {
  // |x| = 1e-3 is where the quotient switches to u + 3x / expm1(x).
  const double p = 1.0;
  const double th_switch = std::asin(1e-3 * std::sqrt(6.0) / (2 * p));
  const double below = ap::eval_f(3, p, th_switch * (1 - 1e-9));
  const double above = ap::eval_f(3, p, th_switch * (1 + 1e-9));
  EXPECT_NEAR(below, above, 1e-11);
}

TEST(VerifyNonneg, AllThreeFunctions) {
  for (int k = 1; k <= 3; ++k) {
    const auto r = ap::verify_nonneg(k, ap::default_box(k), 500);
    EXPECT_TRUE(r.pass) << r.function;
    EXPECT_GE(r.refined_min, -1e-9) << r.function;
    EXPECT_LE(r.refined_min, r.grid_min + 1e-15) << r.function;
  }
}

TEST(VerifyNonneg, F1TouchesZeroAtCorner) {
  const auto r = ap::verify_nonneg(1, ap::default_box(1), 500);
  EXPECT_NEAR(r.refined_min, 0.0, 1e-12);
  EXPECT_NEAR(r.refined_argmin[0], sqrt2, 1e-6);
  EXPECT_NEAR(r.refined_argmin[1], pi, 1e-6);
}

TEST(VerifyNonneg, F3BoxIsOpen) {
  const auto box = ap::default_box(3);
  EXPECT_TRUE(box.theta_lo_open);
  EXPECT_TRUE(box.theta_hi_open);
  const auto r = ap::verify_nonneg(3, box, 100);
  EXPECT_GT(r.refined_argmin[1], 0.0);
  EXPECT_LT(r.refined_argmin[1], pi);
}

TEST(VerifyNonneg, RejectsCoarseGrids) {
  EXPECT_THROW(ap::verify_nonneg(1, ap::default_box(1), 99), std::invalid_argument);
  ap::PThetaBox bad{0.0, 2.0, 0.0, pi};
  EXPECT_THROW(ap::verify_nonneg(1, bad, 100), std::invalid_argument);
}

TEST(VerifyNonneg, SubBoxFindsTouchingZero) {
  ap::PThetaBox box{1.0, sqrt2, 2.5, 3.8};
  const auto r = ap::verify_nonneg(1, box, 200);
  EXPECT_NEAR(r.refined_min, 0.0, 1e-12);
}

TEST(AuxR, Examples) {
  for (double eta : {0.0, 0.5, 1.0, sqrt2}) EXPECT_NEAR(ap::eval_r(0.0, eta), 0.0, 1e-15);
  EXPECT_NEAR(ap::eval_dr_dzeta(0.0, sqrt2), std::sqrt(2.0 / 3.0), 1e-15);
  EXPECT_GT(ap::eval_r(sqrt2, 0.0), 0.0);
  EXPECT_THROW(ap::eval_r(-0.5, 0.0), std::domain_error);
  EXPECT_THROW(ap::eval_dr_dzeta(0.0, 2.0), std::domain_error);
}

TEST(AuxR, DerivativeMatchesFiniteDifference) {
  for (double z : {0.2, 0.7, 1.3}) {
    for (double eta : {0.1, 0.9}) {
      const double h = 1e-6;
      const double fd = (ap::eval_r(z + h, eta) - ap::eval_r(z - h, eta)) / (2 * h);
      EXPECT_NEAR(ap::eval_dr_dzeta(z, eta), fd, 1e-7);
    }
  }
}

TEST(AuxR, NonNegativeOnSector) {
  const int n = 500;
  double mn = INFINITY, mn_dr = INFINITY;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double p = sqrt2 * i / (n - 1), th = (pi / 6) * j / (n - 1);
      mn = std::min(mn, ap::eval_r(p * std::sin(th), p * std::cos(th)));
      mn_dr = std::min(mn_dr, ap::eval_dr_dzeta(p * std::sin(th), p * std::cos(th)));
    }
  }
  EXPECT_GE(mn, -1e-9);
  EXPECT_NEAR(mn_dr, std::sqrt(2.0 / 3.0), 1e-12);
}

TEST(AuxSH, Examples) {
  const auto sh = ap::eval_s_h(0.0, sqrt2);
  EXPECT_NEAR(sh.s, sqrt3, 1e-15);
  EXPECT_NEAR(sh.h, sqrt3, 1e-15);
  EXPECT_NEAR(ap::ds_dvarpi_bound(), (sqrt3 - 2) / sqrt2, 1e-16);
  EXPECT_LT(ap::ds_dvarpi_bound(), 0.0);
  EXPECT_THROW(ap::eval_s_h(1.5, 0.0), std::domain_error);
}

TEST(AuxSH, MonotoneInVarpi) {
  const int n = 200;
  for (int i = 0; i < n; ++i) {
    const double z = sqrt2 * i / (n - 1);
    const double h_line = ap::eval_s_h(z, sqrt2).h;
    for (int j = 0; j < n; ++j) {
      const double w = sqrt2 * j / (n - 1);
      const auto sh = ap::eval_s_h(z, w);
      EXPECT_LE(sh.ds_dvarpi, ap::ds_dvarpi_bound() + 1e-12);
      EXPECT_GE(sh.h, h_line - 1e-12);
    }
  }
}

TEST(AuxSH, DerivativeMatchesFiniteDifference) {
  for (double z : {0.1, 0.8, 1.3}) {
    for (double w : {0.2, 1.0}) {
      const double h = 1e-6;
      const double fd = (ap::eval_s_h(z, w + h).s - ap::eval_s_h(z, w - h).s) / (2 * h);
      EXPECT_NEAR(ap::eval_s_h(z, w).ds_dvarpi, fd, 1e-7);
    }
  }
}

TEST(AuxSH, FactoredFormMatchesDefinition) {
  for (int i = 0; i < 50; ++i) {
    for (int j = 0; j < 50; ++j) {
      const double z = sqrt2 * i / 49, w = sqrt2 * j / 49;
      EXPECT_NEAR(ap::eval_s_h(z, w).h, ap::eval_h_direct(z, w), 1e-12);
    }
  }
}

TEST(AuxSH, NonNegativeOnSquare) {
  const int n = 500;
  double mn = INFINITY;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) mn = std::min(mn, ap::eval_s_h(sqrt2 * i / (n - 1), sqrt2 * j / (n - 1)).h);
  }
  EXPECT_GE(mn, -1e-9);
}

TEST(LineMin, Constant) {
  const auto r = ap::min_h_on_line(1000);
  EXPECT_NEAR(r.min_value, 0.0573242, 1e-6);
  EXPECT_NEAR(ap::line_min_closed_form(), 0.0573242, 1e-7);
  EXPECT_NEAR(r.min_value, r.closed_form, 1e-12);
  EXPECT_GE(ap::line_expression(r.argmin), r.min_value - 1e-12);
  EXPECT_NEAR(r.argmin, sqrt2, 1e-9);
  EXPECT_GT(r.h_min_value, r.min_value);
  EXPECT_THROW(ap::min_h_on_line(999), std::invalid_argument);
}

TEST(LineMin, ReducedExpressionIsSOnTheLine) {
  for (int i = 0; i <= 100; ++i) {
    const double z = sqrt2 * i / 100;
    EXPECT_NEAR(ap::line_expression(z), ap::eval_s_h(z, sqrt2).s, 1e-13);
  }
}

TEST(Symmetry, AllFunctions) {
  EXPECT_LE(ap::check_symmetry(1, 100).max_abs_diff, 1e-15);
  EXPECT_TRUE(ap::check_symmetry(2, 100).pass);
  EXPECT_TRUE(ap::check_symmetry(3, 100).pass);
  EXPECT_THROW(ap::check_symmetry(1, 0), std::invalid_argument);
}

TEST(CrossModule, ReducedFunctionsAreScaledCriterionMargins) {
  const auto spec = make_builtin("dev-hencky", {{"n", 3}});
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> pd(0.05, sqrt2), td(0.01, 2 * pi - 0.01);
  for (int k = 0; k < 2000; ++k) {
    const double p = pd(rng), th = td(rng);
    if (std::abs(th - pi) < 1e-3) continue;
    const auto [a, b] = ptheta_to_ab(p, th);
    const Stretches s = ab_to_stretches(a, b);
    const double f1 = ap::eval_f(1, p, th), f2 = ap::eval_f(2, p, th), f3 = ap::eval_f(3, p, th);
    EXPECT_NEAR(te_margin(spec, s, 1), 2.0 / 3.0 * f1, 1e-9 * (1 + f1));
    EXPECT_NEAR(c4_margin(spec, s, 0, 2).value, 2.0 / 3.0 * f2, 1e-9 * (1 + f2));
    EXPECT_NEAR(c3_margin(spec, s, 0, 2).value, 2.0 / 3.0 * f3, 1e-9 * (1 + f3));
  }
}

TEST(CrossModule, StrongerF3Bound) {
  std::mt19937_64 rng(32);
  std::uniform_real_distribution<double> pd(0.0, sqrt2), td(1e-6, pi - 1e-6);
  for (int k = 0; k < 10000; ++k) {
    const double p = pd(rng), th = td(rng);
    if (p == 0.0) continue;
    const double lower = ap::f3_without_root(p, th);
    EXPECT_GE(ap::eval_f(3, p, th), lower);
    EXPECT_GE(lower, -1e-9) << p << ' ' << th;
  }
}
