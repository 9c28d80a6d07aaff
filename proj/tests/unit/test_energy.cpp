#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "ellscope/energy.hpp"

using namespace ellscope;

namespace {

const double e = std::numbers::e;

std::vector<EnergySpec> catalog() {
  return {make_builtin("dev-hencky", {{"n", 2}}),
          make_builtin("dev-hencky", {{"n", 3}, {"mu", 2.5}}),
          make_builtin("quad-hencky", {{"mu", 1}, {"lame_lambda", 1}}),
          make_builtin("quad-hencky", {{"mu", 1}, {"lame_lambda", 0.5}, {"n", 2}}),
          make_builtin("exp-hencky-iso-2", {{"mu", 1}, {"k", 0.25}}),
          make_builtin("exp-hencky-3", {{"mu", 1}, {"kappa", 2}, {"khat", 0.125}}),
          make_builtin("vol-exp", {{"khat", 0.125}})};
}

Stretches random_stretches(std::mt19937_64& rng, int n, double lo, double hi) {
  std::uniform_real_distribution<double> d(lo, hi);
  if (n == 2) return Stretches{d(rng), d(rng)};
  return Stretches{d(rng), d(rng), d(rng)};
}

}  // namespace

TEST(DevLogNormSq, Examples) {
  EXPECT_EQ(dev_log_norm_sq(Stretches{1.0, 1.0, 1.0}), 0.0);
  EXPECT_NEAR(dev_log_norm_sq(Stretches{e, 1.0}), 0.5, 1e-15);
  EXPECT_NEAR(dev_log_norm_sq(Stretches{e, 1.0, 1.0}), 2.0 / 3.0, 1e-15);
}

TEST(DevLogNormSq, ZeroExactlyAtEqualStretches) {
  for (double l : {1e-3, 0.7, 1.0, 3.3, 1e4}) {
    EXPECT_EQ(dev_log_norm_sq(Stretches{l, l}), 0.0) << l;
    EXPECT_EQ(dev_log_norm_sq(Stretches{l, l, l}), 0.0) << l;
  }
}

TEST(DevLogNormSq, NonNegative) {
  std::mt19937_64 rng(3);
  for (int k = 0; k < 200; ++k) EXPECT_GE(dev_log_norm_sq(random_stretches(rng, 3, 0.01, 100)), 0.0);
}

TEST(MakeBuiltin, Examples) {
  EXPECT_NEAR(make_builtin("dev-hencky", {{"n", 2}}).eval(Stretches{e, 1.0}), 0.5, 1e-15);
  EXPECT_EQ(make_builtin("quad-hencky", {{"mu", 1}, {"lame_lambda", 1}}).eval(Stretches{1.0, 1.0, 1.0}), 0.0);
  EXPECT_DOUBLE_EQ(make_builtin("exp-hencky-iso-2", {{"mu", 1}, {"k", 0.25}}).eval(Stretches{1.0, 1.0}), 4.0);
}

TEST(MakeBuiltin, ScaleInvarianceFlags) {
  EXPECT_TRUE(make_builtin("dev-hencky", {{"n", 3}}).scale_invariant);
  EXPECT_TRUE(make_builtin("exp-hencky-iso-2", {{"mu", 1}, {"k", 1}}).scale_invariant);
  EXPECT_FALSE(make_builtin("quad-hencky", {{"mu", 1}, {"lame_lambda", 1}}).scale_invariant);
  EXPECT_FALSE(make_builtin("exp-hencky-3", {{"mu", 1}, {"kappa", 1}, {"khat", 1}}).scale_invariant);
  EXPECT_FALSE(make_builtin("vol-exp", {{"khat", 1}}).scale_invariant);
}

TEST(MakeBuiltin, AllBuiltinsCarryAnalyticDerivatives) {
  for (const auto& spec : catalog()) {
    EXPECT_TRUE(spec.has_analytic_grad()) << spec.name;
    EXPECT_TRUE(spec.has_analytic_hess()) << spec.name;
  }
}

TEST(MakeBuiltin, ErrorsNameTheOffendingKey) {
  auto key_of = [](std::string_view name, const ParamMap& pm) {
    try {
      make_builtin(name, pm);
    } catch (const ParameterError& err) {
      return err.key();
    }
    return std::string("<no error>");
  };
  EXPECT_EQ(key_of("no-such-energy", {}), "no-such-energy");
  EXPECT_EQ(key_of("dev-hencky", {}), "n");
  EXPECT_EQ(key_of("dev-hencky", {{"n", 4}}), "n");
  EXPECT_EQ(key_of("dev-hencky", {{"n", 2}, {"mu", -1}}), "mu");
  EXPECT_EQ(key_of("quad-hencky", {{"mu", 1}}), "lame_lambda");
  EXPECT_EQ(key_of("exp-hencky-iso-2", {{"mu", 1}, {"k", 0}}), "k");
  EXPECT_EQ(key_of("exp-hencky-3", {{"mu", 1}, {"kappa", 1}, {"khat", -2}}), "khat");
  EXPECT_EQ(key_of("vol-exp", {{"khat", 1}, {"bogus", 1}}), "bogus");
  EXPECT_EQ(key_of("dev-hencky", {{"n", 2}, {"mu", NAN}}), "mu");
}

TEST(MakeBuiltin, DimensionMismatchRejected) {
  const auto spec = make_builtin("dev-hencky", {{"n", 2}});
  EXPECT_THROW(spec.eval(Stretches{1.0, 1.0, 1.0}), std::invalid_argument);
}

TEST(GradG, Examples) {
  const auto d2 = make_builtin("dev-hencky", {{"n", 2}});
  const auto d3 = make_builtin("dev-hencky", {{"n", 3}});
  const Vector g2 = grad_g(d2, Stretches{e, 1.0});
  EXPECT_NEAR(g2[0], 1.0 / e, 1e-14);
  EXPECT_NEAR(g2[1], -1.0, 1e-14);
  const Vector g0 = grad_g(d3, Stretches{1.0, 1.0, 1.0});
  EXPECT_EQ(g0.norm(), 0.0);
  const Vector g3 = grad_g(d3, Stretches{e, 1.0, 1.0});
  EXPECT_NEAR(g3[0], 4.0 / (3.0 * e), 1e-14);
  EXPECT_NEAR(g3[1], -2.0 / 3.0, 1e-14);
  EXPECT_NEAR(g3[2], -2.0 / 3.0, 1e-14);
}

TEST(GradG, ZeroAtEqualStretchesForDevHencky) {
  for (double l : {0.2, 1.0, 7.0}) {
    EXPECT_EQ(grad_g(make_builtin("dev-hencky", {{"n", 2}}), Stretches{l, l}).norm(), 0.0);
    EXPECT_EQ(grad_g(make_builtin("dev-hencky", {{"n", 3}}), Stretches{l, l, l}).norm(), 0.0);
  }
}

TEST(HessG, Examples) {
  const Matrix h2 = hess_g(make_builtin("dev-hencky", {{"n", 2}}), Stretches{1.0, 1.0});
  EXPECT_NEAR(h2(0, 0), 1.0, 1e-15);
  EXPECT_NEAR(h2(1, 1), 1.0, 1e-15);
  EXPECT_NEAR(h2(0, 1), -1.0, 1e-15);
  EXPECT_NEAR(h2(1, 0), -1.0, 1e-15);

  const Matrix h3 = hess_g(make_builtin("dev-hencky", {{"n", 3}}), Stretches{1.0, 1.0, 1.0});
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) EXPECT_NEAR(h3(i, j), i == j ? 4.0 / 3.0 : -2.0 / 3.0, 1e-15);
  }
}

TEST(HessG, QuadHenckyWithoutLameTermIsTwoMuIdentityAtRest) {
  // mu |log U|^2 has Hessian 2 mu I at U = I, not a multiple of the
  // deviatoric Hessian.
  const auto spec = make_builtin("quad-hencky", {{"mu", 1}, {"lame_lambda", 0}});
  const Matrix h = hess_g(spec, Stretches{1.0, 1.0, 1.0});
  const Matrix fd = hess_g(without_analytic_derivatives(spec), Stretches{1.0, 1.0, 1.0});
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      EXPECT_NEAR(h(i, j), i == j ? 2.0 : 0.0, 1e-15);
      EXPECT_NEAR(fd(i, j), h(i, j), 1e-6);
    }
  }
}

TEST(HessG, Symmetric) {
  std::mt19937_64 rng(11);
  for (const auto& spec : catalog()) {
    for (int k = 0; k < 20; ++k) {
      const Stretches s = random_stretches(rng, spec.dim, 0.3, 3.0);
      const Matrix h = hess_g(spec, s);
      EXPECT_EQ((h - h.transpose()).norm(), 0.0) << spec.name;
      const Matrix f = hess_g(without_analytic_derivatives(spec), s);
      EXPECT_EQ((f - f.transpose()).norm(), 0.0) << spec.name;
    }
  }
}

TEST(FdConsistency, BuiltinsAgreeWithFiniteDifferences) {
  for (const auto& spec : catalog()) {
    const FdReport r = fd_consistency_report(spec, 100, 0.5, 2.0);
    EXPECT_EQ(r.samples, 100);
    EXPECT_LE(r.max_grad_rel_err, 1e-6) << spec.name;
    EXPECT_LE(r.max_hess_rel_err, 1e-6) << spec.name;
    EXPECT_LE(r.max_hess_eval_rel_err, 1e-6) << spec.name;
  }
}

TEST(FdConsistency, Deterministic) {
  const auto spec = make_builtin("dev-hencky", {{"n", 3}});
  const FdReport a = fd_consistency_report(spec, 30, 0.5, 2.0, 99);
  const FdReport b = fd_consistency_report(spec, 30, 0.5, 2.0, 99);
  EXPECT_EQ(a.max_grad_rel_err, b.max_grad_rel_err);
  EXPECT_EQ(a.max_hess_rel_err, b.max_hess_rel_err);
  EXPECT_EQ(a.worst_grad_point, b.worst_grad_point);
}

TEST(FdConsistency, WrongGradientIsCaught) {
  auto spec = make_builtin("dev-hencky", {{"n", 3}});
  auto good = spec.grad;
  spec.grad = [good](const Stretches& s) {
    Vector g = good(s);
    g[0] += 0.01;
    return g;
  };
  const FdReport r = fd_consistency_report(spec, 100, 0.5, 2.0);
  EXPECT_GT(r.max_grad_rel_err, 1e-3);
}

TEST(FdConsistency, WrongHessianIsCaught) {
  auto spec = make_builtin("quad-hencky", {{"mu", 1}, {"lame_lambda", 1}});
  auto good = spec.hess;
  spec.hess = [good](const Stretches& s) {
    Matrix h = good(s);
    h(0, 1) += 0.01;
    h(1, 0) += 0.01;
    return h;
  };
  const FdReport r = fd_consistency_report(spec, 100, 0.5, 2.0);
  EXPECT_GT(r.max_hess_rel_err, 1e-3);
}

TEST(FdConsistency, RejectsBadArguments) {
  const auto spec = make_builtin("dev-hencky", {{"n", 2}});
  EXPECT_THROW(fd_consistency_report(spec, 0, 0.5, 2.0), std::invalid_argument);
  EXPECT_THROW(fd_consistency_report(spec, 10, 2.0, 0.5), std::invalid_argument);
}

TEST(Properties, PermutationSymmetry) {
  std::mt19937_64 rng(5);
  for (const auto& spec : catalog()) {
    for (int k = 0; k < 100; ++k) {
      const Stretches s = random_stretches(rng, spec.dim, 0.2, 5.0);
      const double v = spec.eval(s);
      std::array<int, 3> order{0, 1, 2};
      std::span<int> ord(order.data(), static_cast<std::size_t>(spec.dim));
      while (std::next_permutation(ord.begin(), ord.end())) {
        EXPECT_NEAR(spec.eval(s.permuted(ord)), v, 1e-13 * (1.0 + std::abs(v))) << spec.name;
      }
    }
  }
}

TEST(Properties, ScaleInvarianceOfFlaggedSpecs) {
  std::mt19937_64 rng(6);
  for (const auto& spec : catalog()) {
    if (!spec.scale_invariant) continue;
    for (int k = 0; k < 100; ++k) {
      const Stretches s = random_stretches(rng, spec.dim, 0.2, 5.0);
      const double v = spec.eval(s);
      for (double a : {0.1, 3.0, 10.0}) {
        EXPECT_LE(std::abs(spec.eval(s.scaled(a)) - v), 1e-12 * (1.0 + std::abs(v))) << spec.name;
      }
    }
  }
}

TEST(Properties, MuScalesDevHenckyLinearly) {
  const auto one = make_builtin("dev-hencky", {{"n", 3}});
  const auto three = make_builtin("dev-hencky", {{"n", 3}, {"mu", 3}});
  const Stretches s{1.7, 0.8, 1.1};
  EXPECT_NEAR(three.eval(s), 3.0 * one.eval(s), 1e-15);
}

TEST(FdProviders, FiniteDifferencesStayInsidePositiveOrthant) {
  const auto spec = make_builtin("dev-hencky", {{"n", 2}});
  const Stretches s{1e-6, 1.0};
  const Vector g = fd_gradient(spec.eval, s);
  const Vector a = spec.grad(s);
  EXPECT_NEAR(g[0] / a[0], 1.0, 1e-6);
}
