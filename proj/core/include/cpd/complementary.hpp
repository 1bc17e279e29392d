#pragma once
// Total complementary function
//
//   Xi(x, s) = 1/2 <x, G(s) x> - V*(s) - <x, tau(s)>,
//   G(s) = A + sum_k s_k A_k,   tau(s) = f + sum_k s_k b_k,
//
// and the dual functions obtained by eliminating x from it.

#include <optional>

#include "cpd/canonical.hpp"

namespace cpd {

// Proximal anchor for the quadratically perturbed dual: the term
// rho/2 ||x - x_ref||^2 is added to Xi and the dual is maximized over
// {s : G(s) + mu I >= 0}. Requires rho > 0 and 0 <= mu < rho.
struct PerturbationState {
  PerturbationState(Vector x_ref, double rho, double mu);

  Vector x_ref;
  double rho;
  double mu;
};

// Lower-level shift used by the solvers. Unlike PerturbationState it admits
// rho = mu = 0, the unperturbed dual on the open cone G(s) > 0.
struct DualShift {
  Vector x_ref;
  double rho = 0.0;
  double mu = 0.0;

  static DualShift from(const PerturbationState& p) { return {p.x_ref, p.rho, p.mu}; }
  static DualShift unperturbed(int n) { return {Vector::Zero(n), 0.0, 0.0}; }
};

Matrix assemble_G(const CanonicalProblem& problem, const Vector& s);
Vector assemble_tau(const CanonicalProblem& problem, const Vector& s);

double xi_eval(const CanonicalProblem& problem, const Vector& x, const Vector& s);

// Smallest eigenvalue of a symmetric matrix.
double min_eig(const Matrix& G);

// Default pseudo-inverse threshold: 1e-10 times the largest |eigenvalue|.
inline constexpr double kRelativePinvCutoff = 1e-10;

// -1/2 <G^+(s) tau(s), tau(s)> - V*(s), G^+ zeroing modes with |lambda| < cutoff.
double dual_eval(const CanonicalProblem& problem, const Vector& s, double cutoff);
double dual_eval(const CanonicalProblem& problem, const Vector& s);

// -1/2 <(G + rho I)^{-1} t, t> - V*(s) + rho/2 <x_ref, x_ref>,  t = rho x_ref + tau(s).
// Throws InfeasiblePoint if G + rho I is not positive definite.
double perturbed_dual_eval(const CanonicalProblem& problem, const Vector& s,
                           const PerturbationState& p);
// Lambda(x(s)) - grad V*(s), x(s) = (G + rho I)^{-1} t.
Vector perturbed_dual_grad(const CanonicalProblem& problem, const Vector& s,
                           const PerturbationState& p);

// With a perturbation: (G + rho I)^{-1}(rho x_ref + tau). Without: G^+ tau.
Vector recover_x(const CanonicalProblem& problem, const Vector& s,
                 const std::optional<PerturbationState>& p, double cutoff);
Vector recover_x(const CanonicalProblem& problem, const Vector& s,
                 const std::optional<PerturbationState>& p = std::nullopt);

// Everything the inner solver needs at one dual point, from a single
// factorization of G(s) + rho I.
struct DualEvaluation {
  Matrix G;
  Vector tau;
  Vector x;         // minimizer of the shifted Xi in x
  double value;     // shifted dual value
  Vector gradient;  // Lambda(x) - grad V*(s)
};

// Throws InfeasiblePoint if G(s) + shift.rho I is not positive definite.
DualEvaluation evaluate_dual(const CanonicalProblem& problem, const Vector& s,
                             const DualShift& shift);

}  // namespace cpd
