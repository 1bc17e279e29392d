#include <gtest/gtest.h>

#include <random>

#include "cpd/complementary.hpp"
#include "cpd/dual_solver.hpp"
#include "cpd/errors.hpp"
#include "cpd/problems.hpp"
#include "oracles.hpp"

namespace cpd {
namespace {

using testing::random_problem;
using testing::random_vector;

TEST(Barrier, GradientMatchesCentralDifferences) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    const auto p = random_problem(1 + trial % 5, 1 + trial % 4, rng);
    const PerturbationState ps(random_vector(p.n(), rng), 0.5, 0.05);
    const Vector s = feasibility_restore(p, random_vector(p.m(), rng), ps.mu, 0.2);
    const double beta = 1e-2;
    const auto f = [&](const Vector& t) { return barrier_value(p, t, ps, beta); };
    const Vector fd = testing::central_difference(f, s);
    const Vector g = barrier_grad(p, s, ps, beta);
    EXPECT_LE((g - fd).norm(), 1e-5 * (1.0 + fd.norm())) << "trial " << trial;
  }
}

TEST(Barrier, ValueAddsTheLogDeterminant) {
  std::mt19937_64 rng(32);
  const auto p = random_problem(3, 2, rng);
  const PerturbationState ps(random_vector(3, rng), 0.5, 0.05);
  const Vector s = feasibility_restore(p, Vector::Zero(2), ps.mu, 0.3);
  const Matrix G = assemble_G(p, s) + ps.mu * Matrix::Identity(3, 3);
  const double logdet = std::log(G.determinant());
  EXPECT_NEAR(barrier_value(p, s, ps, 0.1), perturbed_dual_eval(p, s, ps) + 0.1 * logdet, 1e-12);
}

// Scalar quartic: G(s) = a + s and the dual is a concave function of one
// variable on s > -a, so a golden-section search is an exact reference.
TEST(InnerSolver, ScalarDualMatchesGoldenSection) {
  struct Case {
    double d, f, a;
  };
  for (const Case c : {Case{1.0, 0.5, 0.0}, Case{2.0, -0.3, 0.0}, Case{-1.0, 1.0, 0.5},
                       Case{0.5, 2.0, -0.2}}) {
    const auto p = scalar_quartic(c.d, c.f, c.a);
    const auto dual = [&](double s) {
      const double g = c.a + s;
      return -c.f * c.f / (2.0 * g) - 0.5 * s * s - c.d * s;
    };
    const double s_ref = testing::golden_section([&](double s) { return -dual(s); }, -c.a + 1e-12,
                                                 -c.a + 50.0, 1e-13);
    BarrierConfig cfg;
    cfg.beta_min = 0.0;
    const Vector s0 = feasibility_restore(p, Vector::Zero(1), 0.0);
    const auto r = maximize_dual(p, DualShift::unperturbed(1), s0, cfg);
    EXPECT_NEAR(r.s_star(0), s_ref, 1e-6) << "d=" << c.d << " f=" << c.f;
    EXPECT_NEAR(r.value, dual(s_ref), 1e-9);
    EXPECT_EQ(r.ascent_violations, 0);
    EXPECT_EQ(r.feasibility_violations, 0);
  }
}

TEST(InnerSolver, PerturbedScalarDualMatchesGoldenSection) {
  const auto p = scalar_quartic(1.0, 0.0);
  const PerturbationState ps(Vector::Constant(1, 0.4), 0.1, 0.01);
  const auto dual = [&](double s) { return perturbed_dual_eval(p, Vector::Constant(1, s), ps); };
  // concave on s > -mu; the maximizer here is interior
  const double s_ref =
      testing::golden_section([&](double s) { return -dual(s); }, -0.01 + 1e-12, 10.0, 1e-13);
  const auto r = maximize_perturbed_dual(p, ps, Vector::Constant(1, 0.5), BarrierConfig{});
  EXPECT_NEAR(r.s_star(0), s_ref, 1e-6);
  // the last barrier weight is 1e-9, which bounds the value gap per constraint
  EXPECT_NEAR(r.value, dual(s_ref), 1e-8);
}

TEST(InnerSolver, NewtonAndBfgsAgree) {
  std::mt19937_64 rng(33);
  for (int trial = 0; trial < 10; ++trial) {
    const auto p = random_problem(4, 3, rng);
    const PerturbationState ps(random_vector(4, rng), 0.5, 0.05);
    const Vector s0 = feasibility_restore(p, Vector::Zero(3), ps.mu);
    BarrierConfig newton, bfgs;
    bfgs.method = InnerMethod::bfgs;
    const auto a = maximize_perturbed_dual(p, ps, s0, newton);
    const auto b = maximize_perturbed_dual(p, ps, s0, bfgs);
    EXPECT_NEAR(a.value, b.value, 1e-6 * (1.0 + std::abs(a.value))) << "trial " << trial;
    EXPECT_EQ(a.ascent_violations, 0);
    EXPECT_EQ(a.feasibility_violations, 0);
    EXPECT_GE(a.min_eig_G, -ps.mu);
  }
}

TEST(InnerSolver, DualValueIsNeverAbovePerturbedPrimal) {
  // max_s P^d_rho(s) <= min_x P(x) + rho/2 ||x - x_ref||^2 for any x.
  std::mt19937_64 rng(34);
  for (int trial = 0; trial < 10; ++trial) {
    const auto p = random_problem(3, 2, rng);
    const PerturbationState ps(random_vector(3, rng), 0.5, 0.05);
    const Vector s0 = feasibility_restore(p, Vector::Zero(2), ps.mu);
    const auto r = maximize_perturbed_dual(p, ps, s0, BarrierConfig{});
    for (int j = 0; j < 20; ++j) {
      const Vector x = random_vector(3, rng);
      EXPECT_LE(r.value, primal_eval(p, x) + 0.5 * ps.rho * (x - ps.x_ref).squaredNorm() + 1e-9);
    }
  }
}

TEST(InnerSolver, RejectsInfeasibleStart) {
  const auto p = problem_four_minima();
  const PerturbationState ps(Vector::Zero(2), 0.1, 0.01);
  EXPECT_THROW(maximize_perturbed_dual(p, ps, Vector{{-1.0, -1.0}}, BarrierConfig{}),
               InfeasiblePoint);
}

TEST(FeasibilityRestore, ReturnsStrictlyFeasiblePoints) {
  std::mt19937_64 rng(35);
  for (int trial = 0; trial < 50; ++trial) {
    const auto p = random_problem(1 + trial % 5, 1 + trial % 3, rng);
    const double mu = trial % 2 ? 0.0 : 0.05;
    const Vector s = feasibility_restore(p, random_vector(p.m(), rng, 3.0), mu);
    EXPECT_GT(min_eig(assemble_G(p, s)) + mu, 0.0);
  }
}

TEST(FeasibilityRestore, KeepsFeasiblePointsUnchanged) {
  const auto p = problem_four_minima();
  const Vector s{{0.3, 0.2}};
  EXPECT_EQ(feasibility_restore(p, s, 0.01), s);
}

TEST(Classify, ThresholdsOnDelta) {
  EXPECT_EQ(classify(1e-3), Degeneracy::nondegenerate);
  EXPECT_EQ(classify(1e-7), Degeneracy::degenerate);
  EXPECT_EQ(classify(-1.0), Degeneracy::degenerate);
  EXPECT_EQ(classify(0.5, 1.0), Degeneracy::degenerate);
  EXPECT_THROW(classify(1.0, 0.0), InvalidInput);
}

TEST(BarrierConfig, Validation) {
  BarrierConfig c;
  EXPECT_NO_THROW(c.validate());
  c.beta_shrink = 1.0;
  EXPECT_THROW(c.validate(), InvalidInput);
  c = {};
  c.beta_min = c.beta0;
  EXPECT_THROW(c.validate(), InvalidInput);
  c = {};
  c.max_inner_iters = 0;
  EXPECT_THROW(c.validate(), InvalidInput);
}

}  // namespace
}  // namespace cpd
