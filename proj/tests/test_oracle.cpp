#include <gtest/gtest.h>

#include "cpd/errors.hpp"
#include "cpd/oracle.hpp"
#include "cpd/problems.hpp"

namespace cpd {
namespace {

TEST(Grid, FindsAllFourMinima) {
  GridOptions opt;
  opt.basins = 8;
  const auto r = grid_search(problem_four_minima(), Vector::Constant(2, -1.5),
                             Vector::Constant(2, 1.5), 301, opt);
  EXPECT_NEAR(r.value, 0.0, 1e-12);
  ASSERT_EQ(r.minima.size(), 4u);
  for (const auto& target : four_minima_solutions()) {
    bool found = false;
    for (const auto& x : r.minima) found = found || (x - target).norm() < 1e-6;
    EXPECT_TRUE(found) << target.transpose();
  }
}

TEST(Grid, WithoutPolishReturnsBestSample) {
  GridOptions opt;
  opt.polish = false;
  const auto p = scalar_quartic(2.0, 0.0);  // minima at +-2
  const auto r = grid_search(p, Vector::Constant(1, -3.0), Vector::Constant(1, 3.0), 7, opt);
  EXPECT_DOUBLE_EQ(std::abs(r.x_best(0)), 2.0);
  EXPECT_DOUBLE_EQ(r.value, 0.0);
}

TEST(Grid, RejectsUnsupportedRequests) {
  const auto inst = quartic_instance(4, 4, 1);
  EXPECT_THROW(grid_search(inst.problem, Vector::Zero(4), Vector::Ones(4), 5), Unsupported);
  const auto p = scalar_quartic(1.0, 0.0);
  EXPECT_THROW(grid_search(p, Vector::Zero(1), Vector::Ones(1), 1), Unsupported);
  EXPECT_THROW(grid_search(p, Vector::Ones(1), Vector::Zero(1), 5), InvalidInput);
}

TEST(Multistart, IsSeededAndReportsTheBest) {
  const auto p = problem_four_minima();
  const auto a = multistart(p, 10, 3, Vector::Constant(2, -1.0), Vector::Constant(2, 1.0));
  const auto b = multistart(p, 10, 3, Vector::Constant(2, -1.0), Vector::Constant(2, 1.0));
  EXPECT_EQ(a.values, b.values);
  ASSERT_EQ(a.values.size(), 10u);
  for (double v : a.values) EXPECT_LE(a.value, v);
  EXPECT_NEAR(a.value, 0.0, 1e-12);
  EXPECT_THROW(multistart(p, 0, 3, Vector::Zero(2), Vector::Ones(2)), InvalidInput);
}

}  // namespace
}  // namespace cpd
