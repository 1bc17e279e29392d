#pragma once
// Test problems: the four-minimum problem, one-dimensional quartics, the
// two-quadratic family and planted-optimum quartic least squares.

#include <array>
#include <cstdint>

#include "cpd/canonical.hpp"

namespace cpd {

// min 1/2 ((x1 + x2)^2 - 1)^2 + 1/2 ((x1 - x2)^2 - 1)^2.
// Encoded with A_1 = 2 [[1, 1], [1, 1]], A_2 = 2 [[1, -1], [-1, 1]], b = 0,
// targets (1, 1), unit weights. Minima at (+-1, 0) and (0, +-1), value 0.
CanonicalProblem problem_four_minima();

// The four start points reported for the four-minimum problem, with the
// minimum each one reached.
std::array<Vector, 4> four_minima_starts();
std::array<Vector, 4> four_minima_reached();
std::array<Vector, 4> four_minima_solutions();

// n = m = 1: P(x) = 1/2 w (x^2 / 2 - d)^2 + a x^2 / 2 - f x.
CanonicalProblem scalar_quartic(double d, double f, double a = 0.0, double w = 1.0);

// 1/2 (x^T A1 x / 2 - c1)^2 + 1/2 (x^T A2 x / 2 - c2)^2 - <x, f>.
CanonicalProblem two_quadratic(const Matrix& A1, const Matrix& A2, double c1, double c2,
                               const Vector& f);

struct QuarticOptions {
  // Each A_i = M_i^T M_i with M_i a rank x n matrix of N(0, scale^2 / n)
  // entries. rank <= 0 means rank = n.
  int rank = 0;
  double scale = 0.3;
  // x_true entries uniform in [-x_box, x_box].
  double x_box = 0.5;
};

struct QuarticInstance {
  CanonicalProblem problem;
  Vector x_true;
};

// 1/2 sum_i (x^T A_i x - d_i)^2 with d_i = x_true^T A_i x_true, so P(x_true) = 0.
// Encoded with A_k = 2 A_i and unit weights. Throws InvalidInput for n < 1 or m < 1.
QuarticInstance quartic_instance(int n, int m, std::uint64_t seed, const QuarticOptions& opt = {});

// max_i |x_i - y_i| minimized over the sign flip y -> -y.
double sign_invariant_error(const Vector& x, const Vector& y);

}  // namespace cpd
