#include "cpd/refine.hpp"

#include <cmath>

#include "cpd/errors.hpp"

namespace cpd {

void RefineConfig::validate() const {
  if (!(armijo_c > 0.0 && armijo_c < 1.0)) throw InvalidInput("refine: armijo_c must lie in (0, 1)");
  if (!(shrink > 0.0 && shrink < 1.0)) throw InvalidInput("refine: shrink must lie in (0, 1)");
  if (!(tol_grad > 0.0)) throw InvalidInput("refine: tol_grad must be positive");
  if (max_iters < 0) throw InvalidInput("refine: max_iters must be non-negative");
}

std::string_view to_string(RefineStatus status) {
  switch (status) {
    case RefineStatus::converged: return "converged";
    case RefineStatus::max_iters: return "max-iters";
    case RefineStatus::line_search_stall: return "line-search-stall";
  }
  return "unknown";
}

RefineResult local_minimize(const CanonicalProblem& problem, const Vector& x0,
                            const RefineConfig& cfg) {
  cfg.validate();
  require_size(x0, problem.n(), "refinement start");
  if (!x0.allFinite()) throw InvalidInput("refinement start has non-finite entries");

  RefineResult out;
  out.x = x0;
  out.value = primal_eval(problem, x0);
  if (!std::isfinite(out.value)) throw InvalidInput("objective is not finite at the start point");
  Vector g = primal_grad(problem, out.x);

  const auto n = x0.size();
  Matrix Hinv = Matrix::Identity(n, n);
  bool scaled = false;
  const bool use_bfgs = cfg.direction == DescentDirection::bfgs;

  out.status = RefineStatus::max_iters;
  int it = 0;
  for (; it < cfg.max_iters; ++it) {
    const double gnorm = g.norm();
    if (gnorm <= cfg.tol_grad) {
      out.status = RefineStatus::converged;
      break;
    }
    bool steepest = !(use_bfgs && scaled);
    Vector d = steepest ? Vector(-g) : Vector(-(Hinv * g));
    double slope = g.dot(d);
    if (!(slope < 0.0)) {
      steepest = true;
      Hinv.setIdentity();
      scaled = false;
      d = -g;
      slope = -gnorm * gnorm;
    }

    double step = 1.0;
    bool accepted = false;
    Vector trial;
    double trial_value = 0.0;
    for (;;) {
      if (step * d.norm() <= 1e-17 * (1.0 + out.x.norm())) break;
      trial = out.x + step * d;
      trial_value = primal_eval(problem, trial);
      if (std::isfinite(trial_value) && trial_value <= out.value + cfg.armijo_c * step * slope) {
        accepted = true;
        break;
      }
      step *= cfg.shrink;
    }
    if (!accepted) {
      if (!steepest) {
        Hinv.setIdentity();
        scaled = false;
        continue;
      }
      out.status = RefineStatus::line_search_stall;
      break;
    }
    if (trial_value > out.value + cfg.armijo_c * step * slope) ++out.armijo_violations;

    Vector g_new = primal_grad(problem, trial);
    if (use_bfgs) {
      const Vector sk = trial - out.x;
      const Vector yk = g_new - g;
      const double sy = sk.dot(yk);
      if (sy > 1e-14 * sk.norm() * yk.norm() && sy > 0.0) {
        if (!scaled) {
          Hinv = Matrix::Identity(n, n) * (sy / yk.squaredNorm());
          scaled = true;
        }
        const double r = 1.0 / sy;
        const Vector Hy = Hinv * yk;
        Hinv -= r * (Hy * sk.transpose() + sk * Hy.transpose());
        Hinv += (r * r * yk.dot(Hy) + r) * (sk * sk.transpose());
      }
    }
    out.x = std::move(trial);
    out.value = trial_value;
    g = std::move(g_new);
  }
  out.iters = it;
  out.grad_norm = g.norm();
  return out;
}

}  // namespace cpd
