#include <gtest/gtest.h>

#include <random>

#include "cpd/complementary.hpp"
#include "cpd/errors.hpp"
#include "cpd/oracle.hpp"
#include "cpd/problems.hpp"
#include "cpd/saddle.hpp"
#include "oracles.hpp"

namespace cpd {
namespace {

const Schedule kHarmonic{ScheduleKind::harmonic, 1.0, 0.1};
const Schedule kConstant{ScheduleKind::constant, 0.1, 0.1};

bool claims_success(const SaddleResult& r) {
  return r.certificate == Certificate::global_candidate ||
         r.certificate == Certificate::unique_global;
}

TEST(Schedule, Values) {
  const Schedule h{ScheduleKind::harmonic, 0.6, 0.1};
  EXPECT_DOUBLE_EQ(h.rho(1), 0.6);
  EXPECT_DOUBLE_EQ(h.rho(3), 0.2);
  EXPECT_DOUBLE_EQ(h.mu(3), 0.1 * 0.2);
  EXPECT_DOUBLE_EQ(kConstant.rho(17), 0.1);
  for (int k = 1; k < 50; ++k) {
    EXPECT_GT(h.mu(k), 0.0);
    EXPECT_LT(h.mu(k), h.rho(k));
  }
  EXPECT_THROW(h.rho(0), InvalidInput);
  EXPECT_THROW((Schedule{ScheduleKind::constant, 0.0, 0.1}.validate()), InvalidInput);
  EXPECT_THROW((Schedule{ScheduleKind::constant, 0.1, 1.0}.validate()), InvalidInput);
  EXPECT_THROW((Schedule{ScheduleKind::constant, 0.1, 0.0}.validate()), InvalidInput);
}

TEST(FourMinima, PublishedStartsReachPublishedMinima) {
  const auto p = problem_four_minima();
  const auto starts = four_minima_starts();
  const auto reached = four_minima_reached();
  for (int i = 0; i < 4; ++i) {
    OuterConfig cfg;
    cfg.x0 = starts[i];
    cfg.refine_policy = RefinePolicy::never;
    const auto r = algorithm2(p, kHarmonic, cfg, 1);
    EXPECT_LE((r.x_bar - reached[i]).cwiseAbs().maxCoeff(), 1e-3) << "start " << i;
    EXPECT_LE(r.s_bar.norm(), 1e-3);
    EXPECT_LE(r.primal_value, 1e-6);
    EXPECT_EQ(r.certificate, Certificate::global_candidate);
    EXPECT_TRUE(r.descent_warnings.empty());
  }
}

TEST(FourMinima, ConstantScheduleAlsoRecovers) {
  const auto p = problem_four_minima();
  for (const auto& x0 : four_minima_starts()) {
    OuterConfig cfg;
    cfg.x0 = x0;
    cfg.refine_policy = RefinePolicy::never;
    const auto r = algorithm2(p, kConstant, cfg, 1);
    EXPECT_LE(r.primal_value, 1e-6);
    EXPECT_TRUE(r.descent_warnings.empty());
  }
}

TEST(FourMinima, FastPathReportsBoundary) {
  const auto r = nondegenerate_solve(problem_four_minima(), OuterConfig{});
  EXPECT_EQ(r.certificate, Certificate::boundary_detected);
  EXPECT_EQ(r.status, SolveStatus::boundary_detected);
}

TEST(FourMinima, CertificateAtMinimumAndAtInteriorPoint) {
  const auto p = problem_four_minima();
  const auto at_min = saddle_certificate(p, Vector{{1.0, 0.0}}, Vector::Zero(2), 1e-10);
  EXPECT_TRUE(at_min.passed);
  EXPECT_TRUE(at_min.membership);
  const auto inside = saddle_certificate(p, Vector{{0.5, 0.0}}, Vector::Zero(2), 1e-10);
  EXPECT_FALSE(inside.passed);
  EXPECT_TRUE(inside.membership);
  EXPECT_NEAR(inside.membership_slack(0), 0.75, 1e-15);
  EXPECT_NEAR(inside.membership_slack(1), 0.75, 1e-15);
  EXPECT_NEAR(inside.canonical_residual, std::sqrt(2.0) * 0.75, 1e-14);
}

// For n = 1 a dense scan plus golden section gives the global minimum.
TEST(OracleEquivalence, ScalarQuartics) {
  struct Case {
    double d, f, a;
  };
  for (const Case c : {Case{1.0, 0.0, 0.0}, Case{1.0, 0.3, 0.0}, Case{2.0, -0.1, 0.0},
                       Case{-0.5, 0.2, 0.0}, Case{1.5, 1.0, -0.5}, Case{0.7, 0.05, 0.1}}) {
    const auto p = scalar_quartic(c.d, c.f, c.a);
    const auto P = [&](double x) { return primal_eval(p, Vector::Constant(1, x)); };
    const double x_ref = testing::scan_minimize(P, -5.0, 5.0);
    OuterConfig cfg;
    cfg.x0 = Vector::Constant(1, 0.3);
    const auto r = algorithm2(p, kConstant, cfg, 1);
    if (claims_success(r)) {
      EXPECT_NEAR(r.primal_value, P(x_ref), 1e-6) << "d=" << c.d << " f=" << c.f;
    }
    EXPECT_GE(r.primal_value, P(x_ref) - 1e-9);
  }
}

TEST(OracleEquivalence, TwoQuadraticAgainstGrid) {
  std::mt19937_64 rng(41);
  int successes = 0;
  for (int trial = 0; trial < 8; ++trial) {
    const Matrix A1 = 2.0 * testing::random_psd(2, rng) + 0.2 * Matrix::Identity(2, 2);
    const Matrix A2 = 2.0 * testing::random_psd(2, rng) + 0.2 * Matrix::Identity(2, 2);
    const auto p = two_quadratic(A1, A2, 1.0, 0.5, testing::random_vector(2, rng, 0.2));
    GridOptions go;
    go.basins = 4;
    const auto grid = grid_search(p, Vector::Constant(2, -4.0), Vector::Constant(2, 4.0), 401, go);
    const auto r = algorithm2(p, kConstant, OuterConfig{}, 1 + trial);
    if (claims_success(r)) {
      ++successes;
      EXPECT_NEAR(r.primal_value, grid.value, 1e-6) << "trial " << trial;
    }
    EXPECT_GE(r.primal_value, grid.value - 1e-6);
  }
  EXPECT_GT(successes, 0);
}

TEST(FastPath, NondegenerateScalarIsUniqueGlobal) {
  // Large |f| tilts the double well until only one minimum is left.
  const auto p = scalar_quartic(1.0, 2.0);
  const auto r = nondegenerate_solve(p, OuterConfig{});
  ASSERT_EQ(r.certificate, Certificate::unique_global);
  const auto P = [&](double x) { return primal_eval(p, Vector::Constant(1, x)); };
  const double x_ref = testing::scan_minimize(P, -5.0, 5.0);
  EXPECT_NEAR(r.x_bar(0), x_ref, 1e-6);
  EXPECT_GT(r.min_eig_G, 1e-6);
}

TEST(LinearPerturb, HasRequestedSizeAndIsSeeded) {
  const auto p = problem_four_minima();
  const auto q = linear_perturb(p, 1e-3, 5);
  EXPECT_NEAR((q.f() - p.f()).norm(), 1e-3, 1e-15);
  EXPECT_EQ(linear_perturb(p, 1e-3, 5).f(), q.f());
  EXPECT_NE(linear_perturb(p, 1e-3, 6).f(), q.f());
  EXPECT_EQ(linear_perturb(p, 0.0, 5).f(), p.f());
  EXPECT_THROW(linear_perturb(p, -1.0, 5), InvalidInput);
}

TEST(Algorithm1, SameSeedSameRun) {
  const auto inst = quartic_instance(5, 7, 3);
  OuterConfig cfg;
  cfg.max_outer = 20;
  const auto a = algorithm2(inst.problem, kConstant, cfg, 9);
  const auto b = algorithm2(inst.problem, kConstant, cfg, 9);
  EXPECT_EQ(a.x_bar, b.x_bar);
  EXPECT_EQ(a.history.size(), b.history.size());
  const auto c = algorithm2(inst.problem, kConstant, cfg, 10);
  EXPECT_NE(a.history.front().primal, c.history.front().primal);
}

TEST(Algorithm1, IterationCapIsReported) {
  const auto inst = quartic_instance(10, 12, 2);
  OuterConfig cfg;
  cfg.max_outer = 1;
  cfg.refine_policy = RefinePolicy::never;
  const auto r = algorithm1(inst.problem, kConstant, cfg, std::nullopt, 1);
  EXPECT_EQ(r.status, SolveStatus::max_iters);
  EXPECT_EQ(r.outer_iters, 1);
  ASSERT_EQ(r.history.size(), 1u);
  EXPECT_DOUBLE_EQ(r.history[0].rho, 0.1);
  EXPECT_DOUBLE_EQ(r.history[0].mu, 0.01);
}

TEST(Algorithm1, IteratesStayInTheRelaxedCone) {
  const auto inst = quartic_instance(8, 10, 4);
  OuterConfig cfg;
  cfg.max_outer = 30;
  const auto r = algorithm1(inst.problem, kHarmonic, cfg, std::nullopt, 2);
  for (const auto& h : r.history) EXPECT_GE(h.min_eig_G, -h.mu * (1.0 + 1e-9)) << h.iter;
  // the monitored Lyapunov sum never rises above its first value beyond slack
  EXPECT_TRUE(r.descent_warnings.empty());
  EXPECT_LE(r.max_descent_violation, 1e-6 * (1.0 + std::abs(r.history.front().xi)));
}

TEST(Algorithm2, PlantedQuarticReachesZeroWhenItClaimsSuccess) {
  int claimed = 0;
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    const auto inst = quartic_instance(4, 6, seed);
    OuterConfig cfg;
    cfg.refine_policy = RefinePolicy::always;
    const auto r = algorithm2(inst.problem, kConstant, cfg, seed);
    if (claims_success(r) || sign_invariant_error(r.x_bar, inst.x_true) <= 1e-4) {
      ++claimed;
      EXPECT_LE(r.primal_value, 1e-6) << "seed " << seed;
    }
  }
  EXPECT_GT(claimed, 0);
}

TEST(Algorithm2, RefinePolicyControlsRefinement) {
  const auto inst = quartic_instance(6, 8, 5);
  OuterConfig cfg;
  cfg.max_outer = 3;
  cfg.refine_policy = RefinePolicy::never;
  EXPECT_FALSE(algorithm2(inst.problem, kConstant, cfg, 1).refinement.has_value());
  cfg.refine_policy = RefinePolicy::always;
  const auto r = algorithm2(inst.problem, kConstant, cfg, 1);
  ASSERT_TRUE(r.refinement.has_value());
  EXPECT_LE(r.primal_value, r.primal_saddle);
}

TEST(OuterConfig, Validation) {
  OuterConfig c;
  EXPECT_NO_THROW(c.validate());
  c.max_outer = 0;
  EXPECT_THROW(c.validate(), InvalidInput);
  c = {};
  c.eps_step = 0.0;
  EXPECT_THROW(c.validate(), InvalidInput);
  c = {};
  c.x0 = Vector::Zero(3);
  EXPECT_THROW(algorithm1(problem_four_minima(), kConstant, c, std::nullopt, 1), InvalidInput);
}

}  // namespace
}  // namespace cpd
