#include "cpd/saddle.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "cpd/errors.hpp"
#include "cpd/random.hpp"

namespace cpd {

std::string_view to_string(ScheduleKind kind) {
  return kind == ScheduleKind::constant ? "constant" : "harmonic";
}

std::string_view to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::converged: return "converged";
    case SolveStatus::max_iters: return "max-iters";
    case SolveStatus::diverged: return "diverged";
    case SolveStatus::boundary_detected: return "boundary-detected";
  }
  return "unknown";
}

std::string_view to_string(Certificate c) {
  switch (c) {
    case Certificate::none: return "none";
    case Certificate::global_candidate: return "global-candidate";
    case Certificate::refined_local: return "refined-local";
    case Certificate::unique_global: return "unique-global";
    case Certificate::boundary_detected: return "boundary-detected";
  }
  return "unknown";
}

double Schedule::rho(int k) const {
  if (k < 1) throw InvalidInput("schedule: iteration index starts at 1");
  return kind == ScheduleKind::constant ? rho0 : rho0 / static_cast<double>(k);
}

void Schedule::validate() const {
  if (!(rho0 > 0.0) || !std::isfinite(rho0)) throw InvalidInput("schedule: rho0 must be positive");
  if (!(mu_ratio > 0.0 && mu_ratio < 1.0)) {
    throw InvalidInput("schedule: mu_ratio must lie in (0, 1)");
  }
}

void OuterConfig::validate() const {
  if (!(eps_step > 0.0)) throw InvalidInput("outer: eps_step must be positive");
  if (max_outer < 1) throw InvalidInput("outer: max_outer must be >= 1");
  if (!(eps_canonical > 0.0)) throw InvalidInput("outer: eps_canonical must be positive");
  if (!(x0_box > 0.0)) throw InvalidInput("outer: x0_box must be positive");
  if (!(delta > 0.0)) throw InvalidInput("outer: delta must be positive");
  if (!(divergence_bound > 0.0)) throw InvalidInput("outer: divergence_bound must be positive");
  if (!(descent_slack >= 0.0)) throw InvalidInput("outer: descent_slack must be non-negative");
  barrier.validate();
  refine.validate();
}

namespace {

double canonical_residual(const CanonicalProblem& problem, const Vector& x, const Vector& s) {
  return (lambda_eval(problem, x) - problem.canonical().conjugate_gradient(s)).norm();
}

double equilibrium_residual(const CanonicalProblem& problem, const Vector& x, const Vector& s) {
  return (assemble_G(problem, s) * x - assemble_tau(problem, s)).norm();
}

// Fills the certificate quantities from (x_saddle, s_bar) and sets x_bar = x_saddle.
void finish_saddle(const CanonicalProblem& problem, const OuterConfig& cfg, SaddleResult& r) {
  r.canonical_residual = canonical_residual(problem, r.x_saddle, r.s_bar);
  r.equilibrium_residual = equilibrium_residual(problem, r.x_saddle, r.s_bar);
  r.min_eig_G = min_eig(assemble_G(problem, r.s_bar));
  r.degeneracy = classify(r.min_eig_G, cfg.delta);
  r.primal_saddle = primal_eval(problem, r.x_saddle);
  r.x_bar = r.x_saddle;
  r.primal_value = r.primal_saddle;
  r.grad_norm = primal_grad(problem, r.x_bar).norm();
}

}  // namespace

SaddleResult algorithm1(const CanonicalProblem& problem, const Schedule& schedule,
                        const OuterConfig& cfg, const std::optional<Vector>& s_init,
                        std::uint64_t seed) {
  schedule.validate();
  cfg.validate();
  const int n = problem.n();

  Vector x;
  if (cfg.x0) {
    require_size(*cfg.x0, n, "initial point");
    if (!cfg.x0->allFinite()) throw InvalidInput("initial point has non-finite entries");
    x = *cfg.x0;
  } else {
    std::mt19937_64 rng = make_rng(seed, Stream::start_point);
    std::uniform_real_distribution<double> unif(-cfg.x0_box, cfg.x0_box);
    x.resize(n);
    for (int i = 0; i < n; ++i) x(i) = unif(rng);
  }

  Vector s;
  if (s_init) {
    require_size(*s_init, problem.m(), "initial dual point");
    s = *s_init;
  } else {
    s = problem.canonical().gradient(lambda_eval(problem, x));
  }

  SaddleResult result;
  result.status = SolveStatus::max_iters;
  double xi_first = 0.0;
  double path_length = 0.0;  // sum of rho/2 ||dx||^2 after the first iteration

  for (int k = 1; k <= cfg.max_outer; ++k) {
    const double rho = schedule.rho(k);
    const double mu = schedule.mu(k);
    const DualShift shift{x, rho, mu};

    const Vector s_start = feasibility_restore(problem, s, mu);
    const InnerResult inner = maximize_dual(problem, shift, s_start, cfg.barrier);
    const DualEvaluation ev = evaluate_dual(problem, inner.s_star, shift);

    IterationRecord rec;
    rec.iter = k;
    rec.rho = rho;
    rec.mu = mu;
    rec.step_x = (ev.x - x).norm();
    rec.step_s = (inner.s_star - s).norm();
    x = ev.x;
    s = inner.s_star;
    rec.xi = xi_eval(problem, x, s);
    rec.primal = primal_eval(problem, x);
    rec.dual = ev.value;
    rec.min_eig_G = inner.min_eig_G;
    rec.canonical_residual = canonical_residual(problem, x, s);
    rec.inner_status = inner.status;
    rec.inner_iters = inner.iterations;

    if (k == 1) {
      xi_first = rec.xi;
    } else {
      path_length += 0.5 * rho * rec.step_x * rec.step_x;
    }
    rec.lyapunov = rec.xi + path_length;
    const double excess = rec.lyapunov - xi_first;
    if (excess > result.max_descent_violation) result.max_descent_violation = excess;
    if (excess > cfg.descent_slack * (1.0 + std::abs(xi_first))) {
      result.descent_warnings.push_back(k);
    }

    result.history.push_back(rec);
    result.outer_iters = k;
    result.dual_value = ev.value;

    if (!x.allFinite() || x.norm() > cfg.divergence_bound) {
      result.status = SolveStatus::diverged;
      break;
    }
    if (rec.step_s <= cfg.eps_step && rec.step_x <= cfg.eps_step) {
      result.status = SolveStatus::converged;
      break;
    }
  }

  result.x_saddle = x;
  result.s_bar = s;
  if (result.status == SolveStatus::diverged) {
    // Residuals of an unbounded iterate carry no information; keep them finite-safe.
    result.x_bar = x;
    result.primal_saddle = result.primal_value = primal_eval(problem, x);
    result.canonical_residual = result.equilibrium_residual = INFINITY;
    result.min_eig_G = min_eig(assemble_G(problem, s));
    result.degeneracy = classify(result.min_eig_G, cfg.delta);
    result.grad_norm = INFINITY;
    return result;
  }
  finish_saddle(problem, cfg, result);
  return result;
}

SaddleResult algorithm2(const CanonicalProblem& problem, const Schedule& schedule,
                        const OuterConfig& cfg, std::uint64_t seed) {
  SaddleResult r = algorithm1(problem, schedule, cfg, std::nullopt, seed);
  if (r.status == SolveStatus::diverged) return r;

  // A small residual alone also holds at stationary points whose G(s) sits on
  // the relaxed boundary; only G(s) >= 0 backs a global claim.
  const bool certified =
      r.canonical_residual <= cfg.eps_canonical && r.min_eig_G >= -cfg.delta;
  bool refine = false;
  switch (cfg.refine_policy) {
    case RefinePolicy::automatic: refine = !certified; break;
    case RefinePolicy::always: refine = true; break;
    case RefinePolicy::never: refine = false; break;
  }
  if (certified) {
    r.certificate = Certificate::global_candidate;
  } else if (refine) {
    r.certificate = Certificate::refined_local;
  }
  if (refine) {
    RefineResult ref = local_minimize(problem, r.x_saddle, cfg.refine);
    r.x_bar = ref.x;
    r.primal_value = ref.value;
    r.grad_norm = ref.grad_norm;
    r.refinement = std::move(ref);
  }
  return r;
}

SaddleResult nondegenerate_solve(const CanonicalProblem& problem, const OuterConfig& cfg) {
  cfg.validate();
  const DualShift shift = DualShift::unperturbed(problem.n());
  const Vector s0 = feasibility_restore(problem, Vector::Zero(problem.m()), 0.0);
  InnerResult inner = maximize_dual(problem, shift, s0, cfg.barrier);

  SaddleResult r;
  r.outer_iters = 1;
  if (classify(inner.min_eig_G, cfg.delta) == Degeneracy::nondegenerate) {
    // Interior maximizer: drop the barrier and polish on the open cone.
    BarrierConfig polish = cfg.barrier;
    polish.beta0 = std::max(cfg.barrier.beta_min, 1e-9);
    polish.beta_min = 0.0;
    InnerResult refined = maximize_dual(problem, shift, inner.s_star, polish);
    if (classify(refined.min_eig_G, cfg.delta) == Degeneracy::nondegenerate) {
      inner = std::move(refined);
    }
  }

  r.s_bar = inner.s_star;
  r.dual_value = inner.value;
  if (classify(inner.min_eig_G, cfg.delta) == Degeneracy::nondegenerate) {
    r.x_saddle = evaluate_dual(problem, r.s_bar, shift).x;
    r.status = SolveStatus::converged;
    r.certificate = Certificate::unique_global;
  } else {
    r.x_saddle = recover_x(problem, r.s_bar);
    r.status = SolveStatus::boundary_detected;
    r.certificate = Certificate::boundary_detected;
  }
  finish_saddle(problem, cfg, r);
  return r;
}

CanonicalProblem linear_perturb(const CanonicalProblem& problem, double epsilon,
                                std::uint64_t seed) {
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) {
    throw InvalidInput("linear_perturb: epsilon must be non-negative");
  }
  if (epsilon == 0.0) return problem;
  std::mt19937_64 rng = make_rng(seed, Stream::perturbation);
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector df(problem.n());
  do {
    for (int i = 0; i < problem.n(); ++i) df(i) = normal(rng);
  } while (df.norm() == 0.0);
  df *= epsilon / df.norm();
  return problem.with_linear_term(problem.f() + df);
}

CertificateReport saddle_certificate(const CanonicalProblem& problem, const Vector& x,
                                     const Vector& s, double tol) {
  require_size(x, problem.n(), "certificate point");
  require_size(s, problem.m(), "certificate dual point");
  CertificateReport rep;
  rep.equilibrium_residual = equilibrium_residual(problem, x, s);
  rep.canonical_residual = canonical_residual(problem, x, s);
  rep.min_eig_G = min_eig(assemble_G(problem, s));
  rep.feasible = rep.min_eig_G >= -tol;
  rep.membership_slack = problem.canonical().conjugate_gradient(s) - lambda_eval(problem, x);
  rep.membership = (rep.membership_slack.array() >= -tol).all();
  rep.passed =
      rep.equilibrium_residual <= tol && rep.canonical_residual <= tol && rep.feasible;
  return rep;
}

}  // namespace cpd
