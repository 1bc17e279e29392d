#pragma once
// Brute-force references for checking solver output.

#include <cstdint>
#include <vector>

#include "cpd/refine.hpp"

namespace cpd {

struct GridOptions {
  bool polish = true;
  // How many of the lowest grid-local minima to polish (at least the best one).
  int basins = 1;
  RefineConfig refine;
};

struct GridResult {
  Vector x_best;
  double value = 0.0;
  // Polished minima from the lowest grid basins, sorted by value, duplicates
  // (within 1e-6) removed. Holds only the best point when polish is off.
  std::vector<Vector> minima;
  std::vector<double> minima_values;
};

// Exhaustive evaluation of P on resolution^n points of the box. Requires
// n <= 3 and 2 <= resolution <= 2001; throws Unsupported otherwise.
GridResult grid_search(const CanonicalProblem& problem, const Vector& lower, const Vector& upper,
                       int resolution, const GridOptions& opt = {});

struct MultistartResult {
  Vector x_best;
  double value = 0.0;
  std::vector<double> values;  // per start, in start order
};

// n_starts points uniform in the box, each refined by local_minimize.
MultistartResult multistart(const CanonicalProblem& problem, int n_starts, std::uint64_t seed,
                            const Vector& lower, const Vector& upper,
                            const RefineConfig& refine = {});

}  // namespace cpd
