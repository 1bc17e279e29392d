#pragma once
// Quadratically perturbed primal-dual outer loop and its drivers.
//
// Each outer iteration k maximizes the perturbed dual P^d_{rho_k} over
// {s : G(s) + mu_k I >= 0}, warm-started from the previous dual iterate, and
// then takes the proximal primal step
//
//   x_{k+1} = (G(s_{k+1}) + rho_k I)^{-1} (rho_k x_k + tau(s_{k+1})).

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "cpd/dual_solver.hpp"
#include "cpd/refine.hpp"

namespace cpd {

enum class ScheduleKind { constant, harmonic };
std::string_view to_string(ScheduleKind kind);

// rho_k = rho0 (constant) or rho0 / k (harmonic), mu_k = mu_ratio * rho_k, k >= 1.
struct Schedule {
  ScheduleKind kind = ScheduleKind::constant;
  double rho0 = 0.1;
  double mu_ratio = 0.1;

  double rho(int k) const;
  double mu(int k) const { return mu_ratio * rho(k); }
  void validate() const;
};

enum class RefinePolicy {
  automatic,  // refine only when the canonical residual exceeds eps_canonical
  always,
  never,
};

struct OuterConfig {
  double eps_step = 1e-6;
  int max_outer = 200;
  double eps_canonical = 1e-4;
  // Start point; when absent, drawn uniformly from [-x0_box, x0_box]^n with the run's seed.
  std::optional<Vector> x0;
  double x0_box = 1.0;
  BarrierConfig barrier;
  RefineConfig refine;
  RefinePolicy refine_policy = RefinePolicy::automatic;
  double delta = 1e-6;               // degeneracy threshold on lambda_min(G)
  double divergence_bound = 1e8;     // ||x_k|| above this stops the run
  double descent_slack = 1e-6;       // tolerance of the Lyapunov monitor

  void validate() const;
};

struct IterationRecord {
  int iter = 0;
  double rho = 0.0;
  double mu = 0.0;
  double xi = 0.0;       // Xi(x_k, s_k)
  double primal = 0.0;   // P(x_k)
  double dual = 0.0;     // P^d_rho at s_k
  double step_x = 0.0;
  double step_s = 0.0;
  double min_eig_G = 0.0;
  double canonical_residual = 0.0;
  // Xi(x_k, s_k) + sum_{i=2..k} rho_i / 2 ||x_i - x_{i-1}||^2, which must not
  // exceed Xi(x_1, s_1).
  double lyapunov = 0.0;
  InnerStatus inner_status = InnerStatus::converged;
  int inner_iters = 0;
};

enum class SolveStatus { converged, max_iters, diverged, boundary_detected };
std::string_view to_string(SolveStatus status);

enum class Certificate {
  none,
  global_candidate,   // canonical residual within eps_canonical and G(s) >= -delta I
  refined_local,      // residual too large, x refined by local descent
  unique_global,      // non-degenerate saddle, x = G^{-1} tau
  boundary_detected,  // fast path found a boundary dual maximizer
};
std::string_view to_string(Certificate c);

struct SaddleResult {
  // Final primal point (after refinement when one was run) and the dual
  // iterate of the saddle solve.
  Vector x_bar;
  Vector s_bar;
  double primal_value = 0.0;  // P(x_bar)
  double grad_norm = 0.0;     // ||grad P(x_bar)||
  double dual_value = 0.0;    // dual value at s_bar

  // Saddle point before refinement, and the certificate quantities measured there.
  Vector x_saddle;
  double primal_saddle = 0.0;
  double canonical_residual = 0.0;    // ||Lambda(x) - grad V*(s)||
  double equilibrium_residual = 0.0;  // ||G(s) x - tau(s)||
  double min_eig_G = 0.0;
  Degeneracy degeneracy = Degeneracy::degenerate;

  int outer_iters = 0;
  std::vector<IterationRecord> history;
  SolveStatus status = SolveStatus::max_iters;
  Certificate certificate = Certificate::none;

  std::optional<RefineResult> refinement;

  // Largest excess of the Lyapunov sum over Xi(x_1, s_1), and the iterations
  // where it exceeded the configured slack.
  double max_descent_violation = 0.0;
  std::vector<int> descent_warnings;
};

// Perturbed outer loop. s_init defaults to grad V(Lambda(x0)); infeasible
// starts are restored with feasibility_restore.
SaddleResult algorithm1(const CanonicalProblem& problem, const Schedule& schedule,
                        const OuterConfig& cfg, const std::optional<Vector>& s_init,
                        std::uint64_t seed);

// algorithm1 followed by the certificate test (canonical residual and
// G(s) >= -delta I) and, per cfg.refine_policy, local refinement of x.
SaddleResult algorithm2(const CanonicalProblem& problem, const Schedule& schedule,
                        const OuterConfig& cfg, std::uint64_t seed);

// Unperturbed dual maximization over G(s) > 0. Returns certificate
// unique_global with x = G^{-1}(s) tau(s) when lambda_min(G(s)) > cfg.delta,
// otherwise status/certificate boundary_detected.
SaddleResult nondegenerate_solve(const CanonicalProblem& problem, const OuterConfig& cfg);

// Copy with f replaced by f + df, df uniform on the sphere of radius epsilon.
CanonicalProblem linear_perturb(const CanonicalProblem& problem, double epsilon,
                                std::uint64_t seed);

struct CertificateReport {
  double equilibrium_residual = 0.0;
  double canonical_residual = 0.0;
  double min_eig_G = 0.0;
  bool feasible = false;  // lambda_min(G(s)) >= -tol
  // grad V*(s) - Lambda(x); non-negative entries mean the orthant
  // variational inequality holds (for the four-minimum test problem these
  // are 1 - (x1 + x2)^2 and 1 - (x1 - x2)^2 at s = 0).
  Vector membership_slack;
  bool membership = false;  // all slack >= -tol
  bool passed = false;      // both residuals <= tol and feasible
};

CertificateReport saddle_certificate(const CanonicalProblem& problem, const Vector& x,
                                     const Vector& s, double tol);

}  // namespace cpd
