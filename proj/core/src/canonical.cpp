#include "cpd/canonical.hpp"

#include <string>
#include <utility>

#include "cpd/errors.hpp"

namespace cpd {

void require_size(const Vector& v, int expected, const char* what) {
  if (v.size() != expected) {
    throw InvalidInput(std::string(what) + ": expected dimension " + std::to_string(expected) +
                       ", got " + std::to_string(v.size()));
  }
}

Matrix symmetrized(const Matrix& M) {
  if (M.rows() != M.cols()) {
    throw InvalidInput("matrix must be square, got " + std::to_string(M.rows()) + "x" +
                       std::to_string(M.cols()));
  }
  if (!M.allFinite()) throw InvalidInput("matrix has non-finite entries");
  return 0.5 * (M + M.transpose());
}

QuadraticComponent::QuadraticComponent(const Matrix& A, Vector b)
    : A_(symmetrized(A)), b_(std::move(b)) {
  if (A_.rows() != b_.size()) {
    throw InvalidInput("quadratic component: A is " + std::to_string(A_.rows()) + "x" +
                       std::to_string(A_.cols()) + " but b has " + std::to_string(b_.size()) +
                       " entries");
  }
  if (!b_.allFinite()) throw InvalidInput("quadratic component: b has non-finite entries");

  const int n = dim();
  for (int i = 0; i < n; ++i) {
    if (b_(i) != 0.0 || A_.row(i).cwiseAbs().maxCoeff() != 0.0) support_.push_back(i);
  }
  const auto s = static_cast<int>(support_.size());
  A_sub_.resize(s, s);
  b_sub_.resize(s);
  for (int p = 0; p < s; ++p) {
    b_sub_(p) = b_(support_[p]);
    for (int q = 0; q < s; ++q) A_sub_(p, q) = A_(support_[p], support_[q]);
  }
}

double QuadraticComponent::eval(const Vector& x) const {
  const auto s = static_cast<int>(support_.size());
  Vector xs(s);
  for (int p = 0; p < s; ++p) xs(p) = x(support_[p]);
  return 0.5 * xs.dot(A_sub_ * xs) - xs.dot(b_sub_);
}

Vector QuadraticComponent::grad(const Vector& x) const {
  const auto s = static_cast<int>(support_.size());
  Vector xs(s);
  for (int p = 0; p < s; ++p) xs(p) = x(support_[p]);
  const Vector gs = A_sub_ * xs - b_sub_;
  Vector g = Vector::Zero(dim());
  for (int p = 0; p < s; ++p) g(support_[p]) = gs(p);
  return g;
}

void QuadraticComponent::add_scaled_to(Matrix& out, double alpha) const {
  const auto s = static_cast<int>(support_.size());
  for (int q = 0; q < s; ++q) {
    for (int p = 0; p < s; ++p) out(support_[p], support_[q]) += alpha * A_sub_(p, q);
  }
}

void QuadraticComponent::add_scaled_linear_to(Vector& out, double alpha) const {
  const auto s = static_cast<int>(support_.size());
  for (int p = 0; p < s; ++p) out(support_[p]) += alpha * b_sub_(p);
}

double QuadraticComponent::frobenius_with(const Matrix& M) const {
  const auto s = static_cast<int>(support_.size());
  double acc = 0.0;
  for (int q = 0; q < s; ++q) {
    for (int p = 0; p < s; ++p) acc += M(support_[p], support_[q]) * A_sub_(p, q);
  }
  return acc;
}

QuadraticMap::QuadraticMap(std::vector<QuadraticComponent> components)
    : components_(std::move(components)) {
  if (components_.empty()) throw InvalidInput("quadratic map needs at least one component");
  n_ = components_.front().dim();
  for (std::size_t k = 0; k < components_.size(); ++k) {
    if (components_[k].dim() != n_) {
      throw InvalidInput("quadratic map: component " + std::to_string(k) + " has dimension " +
                         std::to_string(components_[k].dim()) + ", expected " +
                         std::to_string(n_));
    }
  }
}

Vector QuadraticMap::eval(const Vector& x) const {
  require_size(x, n_, "Lambda(x)");
  Vector xi(m());
  for (int k = 0; k < m(); ++k) xi(k) = (*this)[k].eval(x);
  return xi;
}

LeastSquaresCanonical::LeastSquaresCanonical(Vector targets, Vector weights)
    : d_(std::move(targets)), w_(std::move(weights)) {
  if (d_.size() != w_.size()) {
    throw InvalidInput("canonical function: " + std::to_string(d_.size()) + " targets but " +
                       std::to_string(w_.size()) + " weights");
  }
  if (d_.size() == 0) throw InvalidInput("canonical function: dimension must be at least 1");
  if (!d_.allFinite() || !w_.allFinite()) {
    throw InvalidInput("canonical function: non-finite targets or weights");
  }
  for (Eigen::Index k = 0; k < w_.size(); ++k) {
    if (!(w_(k) > 0.0)) {
      throw InvalidInput("canonical function: weight " + std::to_string(k) +
                         " must be strictly positive, got " + std::to_string(w_(k)));
    }
  }
}

double LeastSquaresCanonical::value(const Vector& xi) const {
  require_size(xi, m(), "V(xi)");
  return 0.5 * (w_.array() * (xi - d_).array().square()).sum();
}

Vector LeastSquaresCanonical::gradient(const Vector& xi) const {
  require_size(xi, m(), "grad V(xi)");
  return w_.cwiseProduct(xi - d_);
}

double LeastSquaresCanonical::conjugate_value(const Vector& s) const {
  require_size(s, m(), "V*(s)");
  return 0.5 * (s.array().square() / w_.array()).sum() + d_.dot(s);
}

Vector LeastSquaresCanonical::conjugate_gradient(const Vector& s) const {
  require_size(s, m(), "grad V*(s)");
  return s.cwiseQuotient(w_) + d_;
}

CanonicalProblem::CanonicalProblem(const Matrix& A, Vector f, QuadraticMap map,
                                   LeastSquaresCanonical canonical)
    : A_(symmetrized(A)), f_(std::move(f)), map_(std::move(map)), canonical_(std::move(canonical)) {
  if (A_.rows() != map_.n()) {
    throw InvalidInput("problem: A is " + std::to_string(A_.rows()) + "x" +
                       std::to_string(A_.cols()) + " but the map has n = " +
                       std::to_string(map_.n()));
  }
  require_size(f_, map_.n(), "problem linear term f");
  if (!f_.allFinite()) throw InvalidInput("problem: f has non-finite entries");
  if (canonical_.m() != map_.m()) {
    throw InvalidInput("problem: map has m = " + std::to_string(map_.m()) +
                       " components but canonical function has dimension " +
                       std::to_string(canonical_.m()));
  }
}

CanonicalProblem CanonicalProblem::with_linear_term(Vector f) const {
  return CanonicalProblem(A_, std::move(f), map_, canonical_);
}

Vector lambda_eval(const CanonicalProblem& problem, const Vector& x) {
  return problem.map().eval(x);
}

double primal_eval(const CanonicalProblem& problem, const Vector& x) {
  require_size(x, problem.n(), "P(x)");
  const Vector xi = problem.map().eval(x);
  return problem.canonical().value(xi) + 0.5 * x.dot(problem.A() * x) - x.dot(problem.f());
}

Vector primal_grad(const CanonicalProblem& problem, const Vector& x) {
  require_size(x, problem.n(), "grad P(x)");
  const Vector s = problem.canonical().gradient(problem.map().eval(x));
  // G(s) x - tau(s) = A x - f + sum_k s_k (A_k x - b_k)
  Vector g = problem.A() * x - problem.f();
  for (int k = 0; k < problem.m(); ++k) {
    if (s(k) != 0.0) g += s(k) * problem.map()[k].grad(x);
  }
  return g;
}

}  // namespace cpd
