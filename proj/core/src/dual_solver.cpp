#include "cpd/dual_solver.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <utility>

#include "cpd/errors.hpp"

namespace cpd {

void BarrierConfig::validate() const {
  if (!(beta_shrink > 0.0 && beta_shrink < 1.0)) {
    throw InvalidInput("barrier: beta_shrink must lie in (0, 1)");
  }
  if (!(beta_min >= 0.0) || !(beta_min < beta0)) {
    throw InvalidInput("barrier: need 0 <= beta_min < beta0");
  }
  if (!(tol_grad > 0.0)) throw InvalidInput("barrier: tol_grad must be positive");
  if (max_inner_iters < 1) throw InvalidInput("barrier: max_inner_iters must be >= 1");
}

std::string_view to_string(InnerStatus status) {
  switch (status) {
    case InnerStatus::converged: return "converged";
    case InnerStatus::max_iters: return "max-iters";
    case InnerStatus::line_search_stall: return "line-search-stall";
  }
  return "unknown";
}

std::string_view to_string(Degeneracy d) {
  return d == Degeneracy::degenerate ? "degenerate" : "nondegenerate";
}

Degeneracy classify(double min_eig_G, double delta) {
  if (!(delta > 0.0)) throw InvalidInput("classify: delta must be positive");
  return min_eig_G > delta ? Degeneracy::nondegenerate : Degeneracy::degenerate;
}

namespace {

constexpr double kArmijoC1 = 1e-4;
constexpr double kBacktrack = 0.5;
// Relative size of the rounding noise in Phi; increases below this cannot be
// resolved by comparing objective values.
constexpr double kObjectiveNoise = 1e-14;

// One dual point of the barrier objective Phi(s) = P^d(s) + beta logdet(G + mu I).
struct BarrierPoint {
  Vector s;
  Vector x;
  double dual_value = 0.0;
  double logdet = 0.0;
  double objective = 0.0;
  Eigen::LLT<Matrix> barrier_factor;  // G + mu I
  Eigen::LLT<Matrix> shifted_factor;  // G + rho I, left empty when rho == mu
};

class BarrierObjective {
 public:
  BarrierObjective(const CanonicalProblem& problem, const DualShift& shift)
      : problem_(problem), shift_(shift) {}

  // Returns nullopt when G(s) + mu I or G(s) + rho I fails to factor.
  std::optional<BarrierPoint> value(const Vector& s, double beta) const {
    BarrierPoint pt;
    pt.s = s;
    const Matrix G = assemble_G(problem_, s);
    Matrix B = G;
    B.diagonal().array() += shift_.mu;
    pt.barrier_factor.compute(B);
    if (pt.barrier_factor.info() != Eigen::Success) return std::nullopt;
    const auto diag = pt.barrier_factor.matrixLLT().diagonal();
    if ((diag.array() <= 0.0).any() || !diag.allFinite()) return std::nullopt;
    pt.logdet = 2.0 * diag.array().log().sum();

    const Vector t = shift_.rho * shift_.x_ref + assemble_tau(problem_, s);
    if (shift_.rho == shift_.mu) {
      pt.x = pt.barrier_factor.solve(t);
    } else {
      Matrix H = G;
      H.diagonal().array() += shift_.rho;
      pt.shifted_factor.compute(H);
      if (pt.shifted_factor.info() != Eigen::Success) return std::nullopt;
      pt.x = pt.shifted_factor.solve(t);
    }
    pt.dual_value = -0.5 * pt.x.dot(t) - problem_.canonical().conjugate_value(s) +
                    0.5 * shift_.rho * shift_.x_ref.squaredNorm();
    pt.objective = pt.dual_value + beta * pt.logdet;
    if (!std::isfinite(pt.objective) || !pt.x.allFinite()) return std::nullopt;
    return pt;
  }

  Vector dual_gradient(const BarrierPoint& pt) const {
    return problem_.map().eval(pt.x) - problem_.canonical().conjugate_gradient(pt.s);
  }

  // Gradient of Phi. With curvature set, also fills -Hessian of Phi:
  //   R^T (G + rho I)^{-1} R + diag(1/w) + beta [tr(B^{-1} A_k B^{-1} A_l)]_kl,
  // with R = [A_k x - b_k]_k and B = G + mu I.
  Vector gradient(const BarrierPoint& pt, double beta, Matrix* curvature = nullptr) const {
    const int n = problem_.n();
    const int m = problem_.m();
    Vector g = dual_gradient(pt);
    if (curvature) {
      Matrix R(n, m);
      for (int k = 0; k < m; ++k) R.col(k) = problem_.map()[k].grad(pt.x);
      const Matrix HinvR =
          shift_.rho == shift_.mu ? pt.barrier_factor.solve(R) : pt.shifted_factor.solve(R);
      *curvature = R.transpose() * HinvR;
      curvature->diagonal() += problem_.canonical().weights().cwiseInverse();
    }
    if (beta == 0.0) return g;

    const Matrix Binv = pt.barrier_factor.solve(Matrix::Identity(n, n));
    if (!curvature) {
      for (int k = 0; k < m; ++k) g(k) += beta * problem_.map()[k].frobenius_with(Binv);
      return g;
    }
    // D_k = B^{-1}[:, S_k] A_k[S_k, S_k] on each component's support S_k, so
    // tr(B^{-1} A_k) = sum_i D_k(S_k[i], i) and
    // tr(B^{-1} A_k B^{-1} A_l) = sum_{i,j} D_k(S_l[j], i) D_l(S_k[i], j).
    std::vector<Matrix> D(static_cast<std::size_t>(m));
    for (int k = 0; k < m; ++k) {
      const auto& comp = problem_.map()[k];
      const auto S = comp.support();
      Matrix cols(n, static_cast<Eigen::Index>(S.size()));
      for (std::size_t j = 0; j < S.size(); ++j) cols.col(static_cast<Eigen::Index>(j)) = Binv.col(S[j]);
      D[k] = cols * comp.support_block();
      double tr = 0.0;
      for (std::size_t i = 0; i < S.size(); ++i) tr += D[k](S[i], static_cast<Eigen::Index>(i));
      g(k) += beta * tr;
    }
    for (int k = 0; k < m; ++k) {
      const auto Sk = problem_.map()[k].support();
      for (int l = 0; l <= k; ++l) {
        const auto Sl = problem_.map()[l].support();
        double acc = 0.0;
        for (std::size_t i = 0; i < Sk.size(); ++i) {
          for (std::size_t j = 0; j < Sl.size(); ++j) {
            acc += D[k](Sl[j], static_cast<Eigen::Index>(i)) *
                   D[l](Sk[i], static_cast<Eigen::Index>(j));
          }
        }
        (*curvature)(k, l) += beta * acc;
        if (l != k) (*curvature)(l, k) += beta * acc;
      }
    }
    return g;
  }

 private:
  const CanonicalProblem& problem_;
  const DualShift& shift_;
};

std::vector<double> barrier_weights(const BarrierConfig& cfg) {
  std::vector<double> betas;
  const double floor = cfg.beta_min > 0.0 ? cfg.beta_min : 1e-9;
  for (double b = cfg.beta0; b > floor * (1.0 + 1e-12); b *= cfg.beta_shrink) betas.push_back(b);
  betas.push_back(cfg.beta_min > 0.0 ? cfg.beta_min : floor);
  if (cfg.beta_min == 0.0) betas.push_back(0.0);
  return betas;
}

struct StageOutcome {
  BarrierPoint point;
  Vector grad;  // gradient of Phi at point
  BarrierStage stage;
};

// Backtracking along d from cur. Returns the first feasible trial meeting the
// Armijo condition. When even the predicted increase slope * step is below the
// objective's rounding noise, a feasible full step that does not lose more
// than that noise is accepted instead.
std::optional<BarrierPoint> line_search(const BarrierObjective& obj, const BarrierPoint& cur,
                                        const Vector& d, double slope, double beta) {
  const double noise = kObjectiveNoise * (1.0 + std::abs(cur.objective));
  double step = 1.0;
  for (;;) {
    const double move = step * d.norm();
    if (move <= 1e-16 * (1.0 + cur.s.norm()) || step < 1e-30) break;
    auto trial = obj.value(cur.s + step * d, beta);
    if (trial) {
      if (trial->objective >= cur.objective + kArmijoC1 * step * slope) return trial;
      if (step * slope <= noise && trial->objective >= cur.objective - noise) return trial;
    }
    step *= kBacktrack;
  }
  return std::nullopt;
}

// Newton ascent on Phi for fixed beta, starting at a feasible point.
StageOutcome run_newton_stage(const BarrierObjective& obj, BarrierPoint start, double beta,
                              double tol, int max_iters, InnerResult& book) {
  StageOutcome out{std::move(start), Vector(), BarrierStage{}};
  BarrierPoint& cur = out.point;
  cur.objective = cur.dual_value + beta * cur.logdet;
  Matrix C;
  Vector g = obj.gradient(cur, beta, &C);

  out.stage.beta = beta;
  out.stage.status = InnerStatus::max_iters;
  int it = 0;
  for (; it < max_iters; ++it) {
    if (g.norm() <= tol) {
      out.stage.status = InnerStatus::converged;
      break;
    }
    Eigen::LLT<Matrix> llt(C);
    if (llt.info() != Eigen::Success) {
      // C is positive definite in exact arithmetic; regularize if rounding broke that.
      C.diagonal().array() += 1e-12 * (1.0 + C.diagonal().cwiseAbs().maxCoeff());
      llt.compute(C);
      if (llt.info() != Eigen::Success) {
        out.stage.status = InnerStatus::line_search_stall;
        break;
      }
    }
    const Vector d = llt.solve(g);
    const double slope = g.dot(d);
    auto accepted = line_search(obj, cur, d, slope, beta);
    if (!accepted) {
      out.stage.status = InnerStatus::line_search_stall;
      break;
    }
    if (accepted->objective < cur.objective - kObjectiveNoise * (1.0 + std::abs(cur.objective))) {
      ++book.ascent_violations;
    }
    cur = std::move(*accepted);
    g = obj.gradient(cur, beta, &C);
  }
  out.stage.iterations = it;
  out.stage.grad_norm = g.norm();
  out.stage.dual_value = cur.dual_value;
  out.stage.barrier_value = cur.objective;
  out.grad = std::move(g);
  return out;
}

// BFGS ascent on Phi for fixed beta, starting at a feasible point.
StageOutcome run_bfgs_stage(const BarrierObjective& obj, BarrierPoint start, double beta,
                            double tol, int max_iters, InnerResult& book) {
  StageOutcome out{std::move(start), Vector(), BarrierStage{}};
  BarrierPoint& cur = out.point;
  cur.objective = cur.dual_value + beta * cur.logdet;
  Vector g = obj.gradient(cur, beta);
  const auto m = g.size();
  Matrix Hinv = Matrix::Identity(m, m);
  bool scaled = false;

  out.stage.beta = beta;
  out.stage.status = InnerStatus::max_iters;
  int it = 0;
  for (; it < max_iters; ++it) {
    const double gnorm = g.norm();
    if (gnorm <= tol) {
      out.stage.status = InnerStatus::converged;
      break;
    }

    bool steepest = !scaled;
    Vector d = steepest ? Vector(g / std::max(1.0, gnorm)) : Vector(Hinv * g);
    double slope = g.dot(d);
    if (!(slope > 0.0)) {
      Hinv.setIdentity();
      scaled = false;
      steepest = true;
      d = g / std::max(1.0, gnorm);
      slope = g.dot(d);
    }

    auto accepted = line_search(obj, cur, d, slope, beta);
    if (!accepted) {
      if (!steepest) {
        // Retry from a fresh curvature model before giving up.
        Hinv.setIdentity();
        scaled = false;
        continue;
      }
      out.stage.status = InnerStatus::line_search_stall;
      break;
    }

    if (accepted->objective < cur.objective - kObjectiveNoise * (1.0 + std::abs(cur.objective))) {
      ++book.ascent_violations;
    }
    Vector g_new = obj.gradient(*accepted, beta);
    const Vector sk = accepted->s - cur.s;
    // Curvature pairs for the minimization of -Phi.
    const Vector yk = g - g_new;
    const double sy = sk.dot(yk);
    if (sy > 1e-14 * sk.norm() * yk.norm() && sy > 0.0) {
      if (!scaled) {
        Hinv = Matrix::Identity(m, m) * (sy / yk.squaredNorm());
        scaled = true;
      }
      const double r = 1.0 / sy;
      const Vector Hy = Hinv * yk;
      const double yHy = yk.dot(Hy);
      Hinv -= r * (Hy * sk.transpose() + sk * Hy.transpose());
      Hinv += (r * r * yHy + r) * (sk * sk.transpose());
    }
    cur = std::move(*accepted);
    g = std::move(g_new);
  }
  out.stage.iterations = it;
  out.stage.grad_norm = g.norm();
  out.stage.dual_value = cur.dual_value;
  out.stage.barrier_value = cur.objective;
  out.grad = std::move(g);
  return out;
}

}  // namespace

InnerResult maximize_dual(const CanonicalProblem& problem, const DualShift& shift,
                          const Vector& s_init, const BarrierConfig& cfg) {
  cfg.validate();
  require_size(s_init, problem.m(), "inner solver start");
  require_size(shift.x_ref, problem.n(), "perturbation anchor");
  if (shift.rho < 0.0 || shift.mu < 0.0 || shift.mu > shift.rho) {
    throw InvalidInput("inner solver: need 0 <= mu <= rho");
  }

  const BarrierObjective obj(problem, shift);
  const std::vector<double> betas = barrier_weights(cfg);
  auto start = obj.value(s_init, betas.front());
  if (!start) {
    throw InfeasiblePoint("inner solver: starting point is not strictly feasible (mu = " +
                          std::to_string(shift.mu) + ")");
  }

  InnerResult result;
  BarrierPoint cur = std::move(*start);
  Vector last_grad;
  for (std::size_t j = 0; j < betas.size(); ++j) {
    const bool last = j + 1 == betas.size();
    const double beta = betas[j];
    const double tol = last ? cfg.tol_grad : std::max(cfg.tol_grad, beta);
    StageOutcome st =
        cfg.method == InnerMethod::newton
            ? run_newton_stage(obj, std::move(cur), beta, tol, cfg.max_inner_iters, result)
            : run_bfgs_stage(obj, std::move(cur), beta, tol, cfg.max_inner_iters, result);
    result.iterations += st.stage.iterations;
    result.stages.push_back(st.stage);
    cur = std::move(st.point);
    last_grad = std::move(st.grad);
  }

  // Every accepted iterate passed the factorization test; re-check the final one.
  if (!obj.value(cur.s, 0.0)) ++result.feasibility_violations;

  result.s_star = cur.s;
  result.value = cur.dual_value;
  result.grad_norm = last_grad.norm();
  result.dual_grad_norm = obj.dual_gradient(cur).norm();
  result.min_eig_G = min_eig(assemble_G(problem, cur.s));
  result.status = result.stages.back().status;
  return result;
}

InnerResult maximize_perturbed_dual(const CanonicalProblem& problem, const PerturbationState& p,
                                    const Vector& s_init, const BarrierConfig& cfg) {
  return maximize_dual(problem, DualShift::from(p), s_init, cfg);
}

double barrier_value(const CanonicalProblem& problem, const Vector& s,
                     const PerturbationState& p, double beta) {
  require_size(s, problem.m(), "barrier point");
  const DualShift shift = DualShift::from(p);
  const BarrierObjective obj(problem, shift);
  auto pt = obj.value(s, beta);
  if (!pt) throw InfeasiblePoint("barrier: G(s) + mu I is not positive definite");
  return pt->objective;
}

Vector barrier_grad(const CanonicalProblem& problem, const Vector& s, const PerturbationState& p,
                    double beta) {
  require_size(s, problem.m(), "barrier point");
  const DualShift shift = DualShift::from(p);
  const BarrierObjective obj(problem, shift);
  auto pt = obj.value(s, beta);
  if (!pt) throw InfeasiblePoint("barrier: G(s) + mu I is not positive definite");
  return obj.gradient(*pt, beta);
}

namespace {

bool factors(const Matrix& M) {
  Eigen::LLT<Matrix> llt(M);
  return llt.info() == Eigen::Success && (llt.matrixLLT().diagonal().array() > 0.0).all();
}

}  // namespace

Vector feasibility_restore(const CanonicalProblem& problem, const Vector& s, double mu,
                           double margin) {
  require_size(s, problem.m(), "feasibility_restore");
  if (!(mu >= 0.0)) throw InvalidInput("feasibility_restore: mu must be non-negative");
  const int n = problem.n();
  const int m = problem.m();
  const Matrix muI = mu * Matrix::Identity(n, n);

  const Matrix G = assemble_G(problem, s);
  if (min_eig(G) + mu > 0.0 && factors(G + muI)) return s;

  const double target = margin >= 0.0 ? margin : (mu > 0.0 ? 0.5 * mu : 1e-2);
  const double lam = min_eig(G);
  int attempts = 0;

  // Directions e with sum_k e_k A_k > 0 lift every eigenvalue of G(s + t e)
  // at least linearly in t (Weyl).
  auto try_direction = [&](const Vector& e) -> std::optional<Vector> {
    ++attempts;
    Matrix D = Matrix::Zero(n, n);
    for (int k = 0; k < m; ++k) {
      if (e(k) != 0.0) problem.map()[k].add_scaled_to(D, e(k));
    }
    const double slope = min_eig(D);
    if (!(slope > 1e-12 * std::max(1.0, D.cwiseAbs().maxCoeff()))) return std::nullopt;
    double t = (target - mu - lam) / slope;
    for (int grow = 0; grow < 60; ++grow) {
      const Vector cand = s + t * e;
      if (min_eig(assemble_G(problem, cand)) + mu >= target * (1.0 - 1e-9)) return cand;
      t *= 2.0;
    }
    return std::nullopt;
  };

  if (auto r = try_direction(Vector::Ones(m))) return *r;
  for (int k = 0; k < m && attempts < 100; ++k) {
    if (auto r = try_direction(Vector::Unit(m, k))) return *r;
  }

  // Shrink toward s = 0 when the origin is strictly feasible.
  if (min_eig(problem.A()) + mu > 0.0) {
    const double origin_margin = std::min(target, min_eig(problem.A()) + mu);
    double theta = 0.5;
    for (; attempts < 100; ++attempts, theta *= 0.5) {
      const Vector cand = theta * s;
      if (min_eig(assemble_G(problem, cand)) + mu >= 0.5 * origin_margin) return cand;
    }
  }
  throw InfeasibleProblem("feasibility_restore: no strictly feasible dual point found (mu = " +
                          std::to_string(mu) + ", lambda_min(G(s)) = " + std::to_string(lam) +
                          ")");
}

}  // namespace cpd
