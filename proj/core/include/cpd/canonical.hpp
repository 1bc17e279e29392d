#pragma once
// Problem representation for minimizing
//
//   P(x) = V(Lambda(x)) + 1/2 <x, A x> - <x, f>,
//   Lambda_k(x) = 1/2 <x, A_k x> - <x, b_k>,
//   V(xi) = sum_k 1/2 w_k (xi_k - d_k)^2,
//
// together with the closed-form Legendre conjugate of V.

#include <Eigen/Dense>

#include <cstddef>
#include <span>
#include <vector>

namespace cpd {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Returns (M + M^T) / 2. Throws InvalidInput if M is not square.
Matrix symmetrized(const Matrix& M);

// One quadratic form 1/2 <x, A x> - <x, b> of the geometric map.
//
// A is stored dense. The set of coordinates touched by A or b (its support)
// is cached so that evaluation and accumulation cost O(|support|^2) rather
// than O(n^2); for distance-type maps the support has 2*dim entries.
class QuadraticComponent {
 public:
  QuadraticComponent(const Matrix& A, Vector b);

  const Matrix& A() const { return A_; }
  const Vector& b() const { return b_; }
  int dim() const { return static_cast<int>(b_.size()); }
  std::span<const int> support() const { return support_; }
  // A restricted to support x support.
  const Matrix& support_block() const { return A_sub_; }

  // 1/2 <x, A x> - <x, b>
  double eval(const Vector& x) const;
  // A x - b
  Vector grad(const Vector& x) const;
  // out += alpha * A
  void add_scaled_to(Matrix& out, double alpha) const;
  // out += alpha * b
  void add_scaled_linear_to(Vector& out, double alpha) const;
  // sum_ij M_ij A_ij, i.e. tr(M A) for symmetric M
  double frobenius_with(const Matrix& M) const;

 private:
  Matrix A_;
  Vector b_;
  std::vector<int> support_;
  Matrix A_sub_;  // A restricted to support x support
  Vector b_sub_;
};

// Lambda(x) = (Lambda_1(x), ..., Lambda_m(x)).
class QuadraticMap {
 public:
  explicit QuadraticMap(std::vector<QuadraticComponent> components);

  int n() const { return n_; }
  int m() const { return static_cast<int>(components_.size()); }
  const QuadraticComponent& operator[](int k) const { return components_[static_cast<std::size_t>(k)]; }
  const std::vector<QuadraticComponent>& components() const { return components_; }

  Vector eval(const Vector& x) const;

 private:
  std::vector<QuadraticComponent> components_;
  int n_ = 0;
};

// V(xi) = sum_k 1/2 w_k (xi_k - d_k)^2 with w_k > 0, and its conjugate
// V*(s) = sum_k s_k^2 / (2 w_k) + d_k s_k.
class LeastSquaresCanonical {
 public:
  LeastSquaresCanonical(Vector targets, Vector weights);

  int m() const { return static_cast<int>(d_.size()); }
  const Vector& targets() const { return d_; }
  const Vector& weights() const { return w_; }

  double value(const Vector& xi) const;
  // w o (xi - d)
  Vector gradient(const Vector& xi) const;
  double conjugate_value(const Vector& s) const;
  // s / w + d
  Vector conjugate_gradient(const Vector& s) const;

 private:
  Vector d_;
  Vector w_;
};

class CanonicalProblem {
 public:
  CanonicalProblem(const Matrix& A, Vector f, QuadraticMap map, LeastSquaresCanonical canonical);

  int n() const { return map_.n(); }
  int m() const { return map_.m(); }
  const Matrix& A() const { return A_; }
  const Vector& f() const { return f_; }
  const QuadraticMap& map() const { return map_; }
  const LeastSquaresCanonical& canonical() const { return canonical_; }

  // Copy with the linear term replaced.
  CanonicalProblem with_linear_term(Vector f) const;

 private:
  Matrix A_;
  Vector f_;
  QuadraticMap map_;
  LeastSquaresCanonical canonical_;
};

Vector lambda_eval(const CanonicalProblem& problem, const Vector& x);
double primal_eval(const CanonicalProblem& problem, const Vector& x);
// G(s(x)) x - tau(s(x)) with s(x) = grad V(Lambda(x)).
Vector primal_grad(const CanonicalProblem& problem, const Vector& x);

// Throws InvalidInput when v.size() != expected.
void require_size(const Vector& v, int expected, const char* what);

}  // namespace cpd
