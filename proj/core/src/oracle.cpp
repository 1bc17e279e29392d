#include "cpd/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <string>

#include "cpd/errors.hpp"
#include "cpd/random.hpp"

namespace cpd {

namespace {

// Above this many points the grid values are not kept and basins are not searched.
constexpr long long kMaxStoredPoints = 20'000'000;

void check_box(const CanonicalProblem& problem, const Vector& lower, const Vector& upper) {
  require_size(lower, problem.n(), "box lower bound");
  require_size(upper, problem.n(), "box upper bound");
  if (!((upper.array() >= lower.array()).all())) throw InvalidInput("box: upper < lower");
}

}  // namespace

GridResult grid_search(const CanonicalProblem& problem, const Vector& lower, const Vector& upper,
                       int resolution, const GridOptions& opt) {
  const int n = problem.n();
  if (n > 3) throw Unsupported("grid_search: n = " + std::to_string(n) + " exceeds 3");
  if (resolution < 2 || resolution > 2001) {
    throw Unsupported("grid_search: resolution must lie in [2, 2001]");
  }
  check_box(problem, lower, upper);

  long long total = 1;
  for (int i = 0; i < n; ++i) total *= resolution;
  const bool store = total <= kMaxStoredPoints;
  std::vector<double> values;
  if (store) values.resize(static_cast<std::size_t>(total));

  const Vector h = (upper - lower) / static_cast<double>(resolution - 1);
  auto point = [&](long long idx) {
    Vector x(n);
    for (int i = 0; i < n; ++i) {
      x(i) = lower(i) + h(i) * static_cast<double>(idx % resolution);
      idx /= resolution;
    }
    return x;
  };

  long long best = 0;
  double best_value = std::numeric_limits<double>::infinity();
  for (long long idx = 0; idx < total; ++idx) {
    const double v = primal_eval(problem, point(idx));
    if (store) values[static_cast<std::size_t>(idx)] = v;
    if (v < best_value) {
      best_value = v;
      best = idx;
    }
  }

  std::vector<long long> seeds{best};
  if (store && opt.basins > 1) {
    // Grid points no larger than any of their 3^n - 1 neighbours.
    std::vector<long long> local;
    for (long long idx = 0; idx < total; ++idx) {
      bool minimum = true;
      long long stride = 1;
      std::vector<int> coord(static_cast<std::size_t>(n));
      long long rest = idx;
      for (int i = 0; i < n; ++i) {
        coord[i] = static_cast<int>(rest % resolution);
        rest /= resolution;
      }
      const int nb = static_cast<int>(std::pow(3, n));
      for (int code = 0; code < nb && minimum; ++code) {
        long long off = 0;
        stride = 1;
        int c = code;
        bool inside = true;
        for (int i = 0; i < n; ++i) {
          const int delta = c % 3 - 1;
          c /= 3;
          const int ci = coord[i] + delta;
          if (ci < 0 || ci >= resolution) inside = false;
          off += delta * stride;
          stride *= resolution;
        }
        if (!inside || off == 0) continue;
        if (values[static_cast<std::size_t>(idx + off)] < values[static_cast<std::size_t>(idx)]) {
          minimum = false;
        }
      }
      if (minimum) local.push_back(idx);
    }
    std::sort(local.begin(), local.end(), [&](long long a, long long b) {
      return values[static_cast<std::size_t>(a)] < values[static_cast<std::size_t>(b)];
    });
    seeds.clear();
    for (std::size_t i = 0; i < local.size() && static_cast<int>(i) < opt.basins; ++i) {
      seeds.push_back(local[i]);
    }
    if (seeds.empty()) seeds.push_back(best);
  }

  GridResult out;
  out.x_best = point(best);
  out.value = best_value;
  if (!opt.polish) {
    out.minima.push_back(out.x_best);
    out.minima_values.push_back(out.value);
    return out;
  }

  std::vector<std::pair<double, Vector>> found;
  for (long long idx : seeds) {
    RefineResult r = local_minimize(problem, point(idx), opt.refine);
    const bool duplicate = std::any_of(found.begin(), found.end(), [&](const auto& f) {
      return (f.second - r.x).norm() <= 1e-6;
    });
    if (!duplicate) found.emplace_back(r.value, r.x);
  }
  std::sort(found.begin(), found.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  for (auto& [v, x] : found) {
    out.minima_values.push_back(v);
    out.minima.push_back(std::move(x));
  }
  if (out.minima_values.front() <= out.value) {
    out.value = out.minima_values.front();
    out.x_best = out.minima.front();
  }
  return out;
}

MultistartResult multistart(const CanonicalProblem& problem, int n_starts, std::uint64_t seed,
                            const Vector& lower, const Vector& upper, const RefineConfig& refine) {
  if (n_starts < 1) throw InvalidInput("multistart: n_starts must be >= 1");
  check_box(problem, lower, upper);
  std::mt19937_64 rng = make_rng(seed, Stream::multistart);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  MultistartResult out;
  out.value = std::numeric_limits<double>::infinity();
  for (int s = 0; s < n_starts; ++s) {
    Vector x0(problem.n());
    for (int i = 0; i < problem.n(); ++i) x0(i) = lower(i) + (upper(i) - lower(i)) * unif(rng);
    RefineResult r = local_minimize(problem, x0, refine);
    out.values.push_back(r.value);
    if (r.value < out.value) {
      out.value = r.value;
      out.x_best = r.x;
    }
  }
  return out;
}

}  // namespace cpd
