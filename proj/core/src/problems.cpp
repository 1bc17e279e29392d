#include "cpd/problems.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "cpd/errors.hpp"
#include "cpd/random.hpp"

namespace cpd {

CanonicalProblem problem_four_minima() {
  Matrix A1(2, 2), A2(2, 2);
  A1 << 2.0, 2.0, 2.0, 2.0;
  A2 << 2.0, -2.0, -2.0, 2.0;
  std::vector<QuadraticComponent> comps;
  comps.emplace_back(A1, Vector::Zero(2));
  comps.emplace_back(A2, Vector::Zero(2));
  return CanonicalProblem(Matrix::Zero(2, 2), Vector::Zero(2), QuadraticMap(std::move(comps)),
                          LeastSquaresCanonical(Vector::Ones(2), Vector::Ones(2)));
}

std::array<Vector, 4> four_minima_starts() {
  return {Vector{{0.81472369, 0.90579194}}, Vector{{0.60684258, 0.48598247}},
          Vector{{-0.61543234, -0.79193703}}, Vector{{-0.92181297, -0.73820724}}};
}

std::array<Vector, 4> four_minima_reached() {
  return {Vector{{0.0, 1.0}}, Vector{{1.0, 0.0}}, Vector{{0.0, -1.0}}, Vector{{-1.0, 0.0}}};
}

std::array<Vector, 4> four_minima_solutions() {
  return {Vector{{1.0, 0.0}}, Vector{{0.0, 1.0}}, Vector{{-1.0, 0.0}}, Vector{{0.0, -1.0}}};
}

CanonicalProblem scalar_quartic(double d, double f, double a, double w) {
  std::vector<QuadraticComponent> comps;
  comps.emplace_back(Matrix::Identity(1, 1), Vector::Zero(1));
  return CanonicalProblem(Matrix::Constant(1, 1, a), Vector::Constant(1, f),
                          QuadraticMap(std::move(comps)),
                          LeastSquaresCanonical(Vector::Constant(1, d), Vector::Constant(1, w)));
}

CanonicalProblem two_quadratic(const Matrix& A1, const Matrix& A2, double c1, double c2,
                               const Vector& f) {
  const auto n = f.size();
  std::vector<QuadraticComponent> comps;
  comps.emplace_back(A1, Vector::Zero(n));
  comps.emplace_back(A2, Vector::Zero(n));
  return CanonicalProblem(Matrix::Zero(n, n), f, QuadraticMap(std::move(comps)),
                          LeastSquaresCanonical(Vector{{c1, c2}}, Vector::Ones(2)));
}

QuarticInstance quartic_instance(int n, int m, std::uint64_t seed, const QuarticOptions& opt) {
  if (n < 1 || m < 1) throw InvalidInput("quartic instance: need n >= 1 and m >= 1");
  if (!(opt.scale > 0.0) || !(opt.x_box > 0.0)) {
    throw InvalidInput("quartic instance: scale and x_box must be positive");
  }
  const int rank = opt.rank > 0 ? opt.rank : n;
  std::mt19937_64 rng = make_rng(seed, Stream::quartic);
  std::normal_distribution<double> normal(0.0, opt.scale / std::sqrt(static_cast<double>(n)));
  std::uniform_real_distribution<double> unif(-opt.x_box, opt.x_box);

  Vector x_true(n);
  for (int i = 0; i < n; ++i) x_true(i) = unif(rng);

  std::vector<QuadraticComponent> comps;
  comps.reserve(static_cast<std::size_t>(m));
  Vector d(m);
  for (int k = 0; k < m; ++k) {
    Matrix M(rank, n);
    for (int r = 0; r < rank; ++r) {
      for (int c = 0; c < n; ++c) M(r, c) = normal(rng);
    }
    const Matrix Ai = M.transpose() * M;
    d(k) = x_true.dot(Ai * x_true);
    comps.emplace_back(2.0 * Ai, Vector::Zero(n));
  }
  return {CanonicalProblem(Matrix::Zero(n, n), Vector::Zero(n), QuadraticMap(std::move(comps)),
                           LeastSquaresCanonical(d, Vector::Ones(m))),
          x_true};
}

double sign_invariant_error(const Vector& x, const Vector& y) {
  if (x.size() != y.size()) throw InvalidInput("sign_invariant_error: size mismatch");
  if (x.size() == 0) return 0.0;
  return std::min((x - y).cwiseAbs().maxCoeff(), (x + y).cwiseAbs().maxCoeff());
}

}  // namespace cpd
