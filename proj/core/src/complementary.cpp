#include "cpd/complementary.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "cpd/errors.hpp"

namespace cpd {

PerturbationState::PerturbationState(Vector x_ref_in, double rho_in, double mu_in)
    : x_ref(std::move(x_ref_in)), rho(rho_in), mu(mu_in) {
  if (!(rho > 0.0) || !std::isfinite(rho)) {
    throw InvalidInput("perturbation: rho must be positive, got " + std::to_string(rho));
  }
  if (!(mu >= 0.0) || !(mu < rho)) {
    throw InvalidInput("perturbation: need 0 <= mu < rho, got mu = " + std::to_string(mu) +
                       ", rho = " + std::to_string(rho));
  }
  if (!x_ref.allFinite()) throw InvalidInput("perturbation: x_ref has non-finite entries");
}

Matrix assemble_G(const CanonicalProblem& problem, const Vector& s) {
  require_size(s, problem.m(), "G(s)");
  Matrix G = problem.A();
  for (int k = 0; k < problem.m(); ++k) {
    if (s(k) != 0.0) problem.map()[k].add_scaled_to(G, s(k));
  }
  return G;
}

Vector assemble_tau(const CanonicalProblem& problem, const Vector& s) {
  require_size(s, problem.m(), "tau(s)");
  Vector tau = problem.f();
  for (int k = 0; k < problem.m(); ++k) {
    if (s(k) != 0.0) problem.map()[k].add_scaled_linear_to(tau, s(k));
  }
  return tau;
}

double xi_eval(const CanonicalProblem& problem, const Vector& x, const Vector& s) {
  require_size(x, problem.n(), "Xi(x, s)");
  const Matrix G = assemble_G(problem, s);
  const Vector tau = assemble_tau(problem, s);
  return 0.5 * x.dot(G * x) - problem.canonical().conjugate_value(s) - x.dot(tau);
}

double min_eig(const Matrix& G) {
  if (G.rows() != G.cols() || G.rows() == 0) throw InvalidInput("min_eig: need a square matrix");
  if (G.rows() == 1) return G(0, 0);
  Eigen::SelfAdjointEigenSolver<Matrix> eig(G, Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success) {
    throw NumericalError("min_eig: symmetric eigensolver failed on a " +
                         std::to_string(G.rows()) + "x" + std::to_string(G.cols()) +
                         " matrix (max |entry| = " + std::to_string(G.cwiseAbs().maxCoeff()) +
                         ")");
  }
  return eig.eigenvalues()(0);
}

namespace {

Vector pinv_apply(const Matrix& G, const Vector& rhs, std::optional<double> cutoff) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(G);
  if (eig.info() != Eigen::Success) throw NumericalError("pseudo-inverse: eigensolver failed");
  const Vector& lambda = eig.eigenvalues();
  const double threshold =
      cutoff ? *cutoff : kRelativePinvCutoff * lambda.cwiseAbs().maxCoeff();
  Vector coeff = eig.eigenvectors().transpose() * rhs;
  for (Eigen::Index i = 0; i < lambda.size(); ++i) {
    coeff(i) = std::abs(lambda(i)) < threshold || lambda(i) == 0.0 ? 0.0 : coeff(i) / lambda(i);
  }
  return eig.eigenvectors() * coeff;
}

double dual_eval_impl(const CanonicalProblem& problem, const Vector& s,
                      std::optional<double> cutoff) {
  const Matrix G = assemble_G(problem, s);
  const Vector tau = assemble_tau(problem, s);
  const Vector x = pinv_apply(G, tau, cutoff);
  return -0.5 * x.dot(tau) - problem.canonical().conjugate_value(s);
}

}  // namespace

double dual_eval(const CanonicalProblem& problem, const Vector& s, double cutoff) {
  if (!(cutoff > 0.0)) throw InvalidInput("dual_eval: cutoff must be positive");
  return dual_eval_impl(problem, s, cutoff);
}

double dual_eval(const CanonicalProblem& problem, const Vector& s) {
  return dual_eval_impl(problem, s, std::nullopt);
}

DualEvaluation evaluate_dual(const CanonicalProblem& problem, const Vector& s,
                             const DualShift& shift) {
  require_size(s, problem.m(), "dual point");
  require_size(shift.x_ref, problem.n(), "perturbation anchor");
  DualEvaluation out;
  out.G = assemble_G(problem, s);
  out.tau = assemble_tau(problem, s);

  Matrix H = out.G;
  H.diagonal().array() += shift.rho;
  Eigen::LLT<Matrix> llt(H);
  if (llt.info() != Eigen::Success) {
    throw InfeasiblePoint("G(s) + rho I is not positive definite (rho = " +
                          std::to_string(shift.rho) + ")");
  }
  const Vector t = shift.rho * shift.x_ref + out.tau;
  out.x = llt.solve(t);
  const auto& canonical = problem.canonical();
  out.value = -0.5 * out.x.dot(t) - canonical.conjugate_value(s) +
              0.5 * shift.rho * shift.x_ref.squaredNorm();
  out.gradient = problem.map().eval(out.x) - canonical.conjugate_gradient(s);
  if (!std::isfinite(out.value) || !out.gradient.allFinite()) {
    throw InfeasiblePoint("dual evaluation produced non-finite values");
  }
  return out;
}

double perturbed_dual_eval(const CanonicalProblem& problem, const Vector& s,
                           const PerturbationState& p) {
  return evaluate_dual(problem, s, DualShift::from(p)).value;
}

Vector perturbed_dual_grad(const CanonicalProblem& problem, const Vector& s,
                           const PerturbationState& p) {
  return evaluate_dual(problem, s, DualShift::from(p)).gradient;
}

Vector recover_x(const CanonicalProblem& problem, const Vector& s,
                 const std::optional<PerturbationState>& p, double cutoff) {
  if (p) return evaluate_dual(problem, s, DualShift::from(*p)).x;
  if (!(cutoff > 0.0)) throw InvalidInput("recover_x: cutoff must be positive");
  return pinv_apply(assemble_G(problem, s), assemble_tau(problem, s), cutoff);
}

Vector recover_x(const CanonicalProblem& problem, const Vector& s,
                 const std::optional<PerturbationState>& p) {
  if (p) return evaluate_dual(problem, s, DualShift::from(*p)).x;
  return pinv_apply(assemble_G(problem, s), assemble_tau(problem, s), std::nullopt);
}

}  // namespace cpd
