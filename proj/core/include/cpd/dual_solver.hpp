#pragma once
// Maximization of the (perturbed) canonical dual over the relaxed
// spectrahedron {s : G(s) + mu I >= 0} by a log-det barrier path. Each
// barrier stage is an ascent method with Armijo backtracking that rejects any
// trial point where G(s) + mu I fails to factor.

#include <string_view>
#include <vector>

#include "cpd/complementary.hpp"

namespace cpd {

enum class InnerMethod {
  newton,  // exact Hessian of the barrier objective
  bfgs,    // quasi-Newton; cheaper per step, stalls near a stiff barrier wall
};

struct BarrierConfig {
  double beta0 = 1e-2;
  double beta_shrink = 0.1;
  double beta_min = 1e-9;
  double tol_grad = 1e-8;
  int max_inner_iters = 500;
  InnerMethod method = InnerMethod::newton;

  // Throws InvalidInput on inconsistent settings.
  void validate() const;
};

enum class InnerStatus { converged, max_iters, line_search_stall };
std::string_view to_string(InnerStatus status);

// Outcome of one barrier weight.
struct BarrierStage {
  double beta = 0.0;
  double dual_value = 0.0;     // P^d at the stage solution
  double barrier_value = 0.0;  // P^d + beta * logdet(G + mu I)
  double grad_norm = 0.0;      // barrier-objective gradient norm
  int iterations = 0;
  InnerStatus status = InnerStatus::converged;
};

struct InnerResult {
  Vector s_star;
  double value = 0.0;           // P^d at s_star
  double grad_norm = 0.0;       // barrier-objective gradient norm at the last stage
  double dual_grad_norm = 0.0;  // ||grad P^d(s_star)||
  double min_eig_G = 0.0;
  int iterations = 0;
  InnerStatus status = InnerStatus::converged;
  std::vector<BarrierStage> stages;
  // Per-iteration checks: accepted steps that failed to increase the barrier
  // objective, and accepted iterates whose G + mu I did not factor. Both are
  // expected to stay zero.
  int ascent_violations = 0;
  int feasibility_violations = 0;
};

// Requires s_init strictly feasible (G(s_init) + mu I > 0); throws
// InfeasiblePoint otherwise.
InnerResult maximize_perturbed_dual(const CanonicalProblem& problem, const PerturbationState& p,
                                    const Vector& s_init, const BarrierConfig& cfg);

// Same path for an arbitrary shift, including the unperturbed dual
// (rho = mu = 0, barrier on G itself). With cfg.beta_min == 0 the last stage
// runs without barrier.
InnerResult maximize_dual(const CanonicalProblem& problem, const DualShift& shift,
                          const Vector& s_init, const BarrierConfig& cfg);

// P^d_rho(s) + beta * logdet(G(s) + mu I). Throws InfeasiblePoint outside the cone.
double barrier_value(const CanonicalProblem& problem, const Vector& s,
                     const PerturbationState& p, double beta);
// grad P^d_rho(s) + beta * [tr((G + mu I)^{-1} A_k)]_k
Vector barrier_grad(const CanonicalProblem& problem, const Vector& s, const PerturbationState& p,
                    double beta);

// Returns s itself when G(s) + mu I is already positive definite. Otherwise
// shifts s along the all-ones or a coordinate direction e with
// sum_k e_k A_k > 0 until lambda_min(G) + mu >= margin, or shrinks s toward
// the origin when G(0) + mu I > 0. margin < 0 selects the default
// (mu / 2, or 1e-2 when mu == 0). Throws InfeasibleProblem after 100 failed
// attempts.
Vector feasibility_restore(const CanonicalProblem& problem, const Vector& s, double mu,
                           double margin = -1.0);

enum class Degeneracy { degenerate, nondegenerate };
std::string_view to_string(Degeneracy d);

// nondegenerate iff min_eig_G > delta.
Degeneracy classify(double min_eig_G, double delta = 1e-6);

}  // namespace cpd
