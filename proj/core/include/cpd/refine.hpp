#pragma once

#include <string_view>

#include "cpd/canonical.hpp"

namespace cpd {

enum class DescentDirection {
  steepest,  // -grad P
  bfgs,      // quasi-Newton, falls back to -grad P when not a descent direction
};

struct RefineConfig {
  double tol_grad = 1e-10;
  int max_iters = 10000;
  double armijo_c = 1e-4;
  double shrink = 0.5;
  DescentDirection direction = DescentDirection::bfgs;

  void validate() const;
};

enum class RefineStatus { converged, max_iters, line_search_stall };
std::string_view to_string(RefineStatus status);

struct RefineResult {
  Vector x;
  double value = 0.0;
  double grad_norm = 0.0;
  int iters = 0;
  RefineStatus status = RefineStatus::converged;
  // Accepted steps violating P(x+) <= P(x) + c * step * <grad P, d>. Stays 0.
  int armijo_violations = 0;
};

// Line-search descent on P from x0. Throws InvalidInput if P(x0) is not finite.
RefineResult local_minimize(const CanonicalProblem& problem, const Vector& x0,
                            const RefineConfig& cfg = {});

}  // namespace cpd
