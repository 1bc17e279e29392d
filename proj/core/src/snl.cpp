#include "cpd/snl.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "cpd/errors.hpp"
#include "cpd/random.hpp"

namespace cpd {

void SNLInstance::validate() const {
  if (dim != 2 && dim != 3) throw InvalidInput("snl: dim must be 2 or 3");
  if (n_sensors < 1) throw InvalidInput("snl: need at least one sensor");
  for (const auto& a : anchors) {
    if (a.size() != dim) throw InvalidInput("snl: anchor dimension mismatch");
  }
  const int n_anchors = static_cast<int>(anchors.size());
  for (const auto& e : sensor_edges) {
    if (e.i < 0 || e.j < 0 || e.i >= n_sensors || e.j >= n_sensors || e.i >= e.j) {
      throw InvalidInput("snl: sensor edge (" + std::to_string(e.i) + ", " +
                         std::to_string(e.j) + ") needs 0 <= i < j < N");
    }
    if (!(e.distance > 0.0) || !std::isfinite(e.distance)) {
      throw InvalidInput("snl: sensor edge distances must be positive");
    }
  }
  for (const auto& e : anchor_edges) {
    if (e.i < 0 || e.i >= n_sensors || e.k < 0 || e.k >= n_anchors) {
      throw InvalidInput("snl: anchor edge (" + std::to_string(e.i) + ", " +
                         std::to_string(e.k) + ") out of range");
    }
    if (!(e.distance > 0.0) || !std::isfinite(e.distance)) {
      throw InvalidInput("snl: anchor edge distances must be positive");
    }
  }
  if (sensor_edges.empty() && anchor_edges.empty()) throw InvalidInput("snl: no edges");
  if (true_positions) {
    if (static_cast<int>(true_positions->size()) != n_sensors) {
      throw InvalidInput("snl: true_positions must list every sensor");
    }
    for (const auto& p : *true_positions) {
      if (p.size() != dim) throw InvalidInput("snl: true position dimension mismatch");
    }
  }
}

CanonicalProblem build_problem(const SNLInstance& inst) {
  inst.validate();
  const int dim = inst.dim;
  const int n = dim * inst.n_sensors;
  const auto m = inst.sensor_edges.size() + inst.anchor_edges.size();
  std::vector<QuadraticComponent> comps;
  comps.reserve(m);
  Vector targets(static_cast<Eigen::Index>(m));
  Eigen::Index k = 0;

  for (const auto& e : inst.sensor_edges) {
    Matrix A = Matrix::Zero(n, n);
    for (int c = 0; c < dim; ++c) {
      const int p = e.i * dim + c;
      const int q = e.j * dim + c;
      A(p, p) = 2.0;
      A(q, q) = 2.0;
      A(p, q) = -2.0;
      A(q, p) = -2.0;
    }
    comps.emplace_back(A, Vector::Zero(n));
    targets(k++) = e.distance * e.distance;
  }
  for (const auto& e : inst.anchor_edges) {
    Matrix A = Matrix::Zero(n, n);
    Vector b = Vector::Zero(n);
    const Vector& a = inst.anchors[static_cast<std::size_t>(e.k)];
    for (int c = 0; c < dim; ++c) {
      const int p = e.i * dim + c;
      A(p, p) = 2.0;
      b(p) = 2.0 * a(c);
    }
    comps.emplace_back(A, b);
    targets(k++) = e.distance * e.distance - a.squaredNorm();
  }
  return CanonicalProblem(Matrix::Zero(n, n), Vector::Zero(n), QuadraticMap(std::move(comps)),
                          LeastSquaresCanonical(targets, Vector::Constant(targets.size(), 2.0)));
}

double snl_objective(const SNLInstance& inst, const Positions& x) {
  if (static_cast<int>(x.size()) != inst.n_sensors) throw InvalidInput("snl: position count");
  double total = 0.0;
  for (const auto& e : inst.sensor_edges) {
    const double r = (x[static_cast<std::size_t>(e.i)] - x[static_cast<std::size_t>(e.j)])
                         .squaredNorm() -
                     e.distance * e.distance;
    total += r * r;
  }
  for (const auto& e : inst.anchor_edges) {
    const double r = (x[static_cast<std::size_t>(e.i)] - inst.anchors[static_cast<std::size_t>(e.k)])
                         .squaredNorm() -
                     e.distance * e.distance;
    total += r * r;
  }
  return total;
}

double perturb_distance(double d, double xi) { return std::max(1.0 + xi, 0.1) * d; }

Positions default_anchors(int dim) {
  if (dim != 2 && dim != 3) throw InvalidInput("snl: dim must be 2 or 3");
  Positions out;
  for (int mask = 0; mask < (1 << dim); ++mask) {
    Vector a(dim);
    // Corner order for dim 2: (lo, lo), (lo, hi), (hi, lo), (hi, hi).
    for (int c = 0; c < dim; ++c) a(c) = (mask >> (dim - 1 - c)) & 1 ? 0.875 : 0.125;
    out.push_back(a);
  }
  return out;
}

SNLInstance gen_instance(int n_sensors, int dim, double radio_range, double sigma,
                         std::uint64_t seed) {
  if (n_sensors < 1) throw InvalidInput("snl: n_sensors must be >= 1");
  if (!(radio_range > 0.0)) throw InvalidInput("snl: radio_range must be positive");
  if (!(sigma >= 0.0)) throw InvalidInput("snl: sigma must be non-negative");

  SNLInstance inst;
  inst.dim = dim;
  inst.anchors = default_anchors(dim);
  inst.n_sensors = n_sensors;
  inst.radio_range = radio_range;
  inst.sigma = sigma;

  std::mt19937_64 rng = make_rng(seed, Stream::snl);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);

  Positions truth;
  for (int i = 0; i < n_sensors; ++i) {
    Vector p(dim);
    for (int c = 0; c < dim; ++c) p(c) = unif(rng);
    truth.push_back(p);
  }
  for (int i = 0; i < n_sensors; ++i) {
    for (int j = i + 1; j < n_sensors; ++j) {
      const double d = (truth[i] - truth[j]).norm();
      if (d <= radio_range && d > 0.0) {
        inst.sensor_edges.push_back({i, j, perturb_distance(d, sigma * normal(rng))});
      }
    }
  }
  for (int i = 0; i < n_sensors; ++i) {
    for (int k = 0; k < static_cast<int>(inst.anchors.size()); ++k) {
      const double e = (truth[i] - inst.anchors[k]).norm();
      if (e <= radio_range && e > 0.0) {
        inst.anchor_edges.push_back({i, k, perturb_distance(e, sigma * normal(rng))});
      }
    }
  }
  inst.true_positions = std::move(truth);
  return inst;
}

namespace {

std::vector<std::vector<int>> sensor_adjacency(const SNLInstance& inst) {
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(inst.n_sensors));
  for (const auto& e : inst.sensor_edges) {
    adj[e.i].push_back(e.j);
    adj[e.j].push_back(e.i);
  }
  return adj;
}

}  // namespace

bool is_connected(const SNLInstance& inst) {
  const auto adj = sensor_adjacency(inst);
  std::vector<char> seen(static_cast<std::size_t>(inst.n_sensors), 0);
  std::vector<int> stack;
  for (const auto& e : inst.anchor_edges) {
    if (!seen[e.i]) {
      seen[e.i] = 1;
      stack.push_back(e.i);
    }
  }
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    for (int w : adj[v]) {
      if (!seen[w]) {
        seen[w] = 1;
        stack.push_back(w);
      }
    }
  }
  return std::all_of(seen.begin(), seen.end(), [](char c) { return c != 0; });
}

bool is_trilaterable(const SNLInstance& inst) {
  const auto adj = sensor_adjacency(inst);
  const auto N = static_cast<std::size_t>(inst.n_sensors);
  std::vector<int> anchor_count(N, 0);
  for (const auto& e : inst.anchor_edges) ++anchor_count[e.i];
  std::vector<char> located(N, 0);
  const int need = inst.dim + 1;
  for (bool progress = true; progress;) {
    progress = false;
    for (std::size_t v = 0; v < N; ++v) {
      if (located[v]) continue;
      int known = anchor_count[v];
      for (int w : adj[v]) known += located[w] ? 1 : 0;
      if (known >= need) {
        located[v] = 1;
        progress = true;
      }
    }
  }
  return std::all_of(located.begin(), located.end(), [](char c) { return c != 0; });
}

double rmsd(const Positions& estimated, const Positions& truth) {
  if (estimated.size() != truth.size() || truth.empty()) {
    throw InvalidInput("rmsd: position lists must be non-empty and of equal length");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (estimated[i].size() != truth[i].size()) throw InvalidInput("rmsd: dimension mismatch");
    sum += (estimated[i] - truth[i]).squaredNorm();
  }
  return std::sqrt(sum / static_cast<double>(truth.size()));
}

double rmsd_nearest(const Positions& estimated, const std::vector<Positions>& solutions) {
  if (solutions.empty()) throw InvalidInput("rmsd_nearest: no solutions given");
  double best = std::numeric_limits<double>::infinity();
  for (const auto& s : solutions) best = std::min(best, rmsd(estimated, s));
  return best;
}

Vector stack_positions(const Positions& p) {
  if (p.empty()) return Vector();
  const auto dim = p.front().size();
  Vector x(static_cast<Eigen::Index>(p.size()) * dim);
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i].size() != dim) throw InvalidInput("stack_positions: mixed dimensions");
    x.segment(static_cast<Eigen::Index>(i) * dim, dim) = p[i];
  }
  return x;
}

Positions unstack_positions(const Vector& x, int dim) {
  if (dim < 1 || x.size() % dim != 0) throw InvalidInput("unstack_positions: bad dimension");
  Positions out;
  for (Eigen::Index i = 0; i < x.size() / dim; ++i) out.push_back(x.segment(i * dim, dim));
  return out;
}

namespace {

Positions six_sensor_truth() {
  return {Vector{{0.5818, 0.0968}}, Vector{{0.0791, 0.0091}}, Vector{{0.7342, 0.8470}},
          Vector{{0.1936, 0.6169}}, Vector{{0.8506, 0.7257}}, Vector{{0.4301, 0.2720}}};
}

// Mirror image of x in the line through p and q.
Vector reflect(const Vector& x, const Vector& p, const Vector& q) {
  const Vector u = (q - p).normalized();
  const Vector v = x - p;
  return p + 2.0 * v.dot(u) * u - v;
}

}  // namespace

SNLInstance fixture_six_sensors() {
  SNLInstance inst;
  inst.dim = 2;
  inst.anchors = default_anchors(2);
  inst.n_sensors = 6;
  inst.sigma = 0.0;
  const Positions x = six_sensor_truth();
  const auto& a = inst.anchors;

  const std::vector<std::pair<int, int>> sensor_pairs = {{0, 5}, {1, 5}, {2, 4}, {3, 5}};
  const std::vector<std::pair<int, int>> anchor_pairs = {
      {0, 0}, {0, 2}, {0, 3}, {1, 0}, {2, 2}, {2, 3}, {3, 0}, {3, 1}, {3, 3},
      {4, 2}, {4, 3}, {5, 0}, {5, 2}};
  double longest = 0.0;
  for (auto [i, j] : sensor_pairs) {
    const double d = (x[i] - x[j]).norm();
    inst.sensor_edges.push_back({i, j, d});
    longest = std::max(longest, d);
  }
  for (auto [i, k] : anchor_pairs) {
    const double e = (x[i] - a[k]).norm();
    inst.anchor_edges.push_back({i, k, e});
    longest = std::max(longest, e);
  }
  inst.radio_range = longest;
  inst.true_positions = x;
  return inst;
}

std::vector<Positions> six_sensor_solutions() {
  const Positions base = six_sensor_truth();
  const Positions anchors = default_anchors(2);
  Positions flip1 = base;
  flip1[1] = reflect(base[1], anchors[0], base[5]);
  Positions flip24 = base;
  flip24[2] = reflect(base[2], anchors[2], anchors[3]);
  flip24[4] = reflect(base[4], anchors[2], anchors[3]);
  Positions both = flip24;
  both[1] = flip1[1];
  return {base, flip1, flip24, both};
}

Positions twenty_sensor_truth() {
  return {Vector{{0.5818, 0.0968}}, Vector{{0.0791, 0.0091}}, Vector{{0.7342, 0.8470}},
          Vector{{0.1936, 0.6169}}, Vector{{0.8506, 0.7257}}, Vector{{0.4301, 0.2720}},
          Vector{{0.9846, 0.5671}}, Vector{{0.3429, 0.3741}}, Vector{{0.2070, 0.6663}},
          Vector{{0.6176, 0.5756}}, Vector{{0.1644, 0.2955}}, Vector{{0.6533, 0.2237}},
          Vector{{0.6673, 0.8736}}, Vector{{0.2161, 0.6226}}, Vector{{0.7701, 0.3595}},
          Vector{{0.1894, 0.1458}}, Vector{{0.8786, 0.8741}}, Vector{{0.4776, 0.6487}},
          Vector{{0.2370, 0.5215}}, Vector{{0.2197, 0.0249}}};
}

std::vector<Positions> twenty_sensor_solutions() {
  // Sensor 6 hears exactly two nodes within range, so its mirror image across
  // the line through them fits every measurement equally well.
  const Positions base = twenty_sensor_truth();
  const Positions anchors = default_anchors(2);
  constexpr int loose = 6;
  std::vector<Vector> heard;
  for (int j = 0; j < static_cast<int>(base.size()); ++j) {
    if (j != loose && (base[j] - base[loose]).norm() <= 0.3) heard.push_back(base[j]);
  }
  for (const auto& a : anchors) {
    if ((a - base[loose]).norm() <= 0.3) heard.push_back(a);
  }
  Positions flipped = base;
  flipped[loose] = reflect(base[loose], heard.at(0), heard.at(1));
  return {base, flipped};
}

SNLInstance fixture_twenty_sensors(double sigma, std::uint64_t seed) {
  if (!(sigma >= 0.0)) throw InvalidInput("snl: sigma must be non-negative");
  SNLInstance inst;
  inst.dim = 2;
  inst.anchors = default_anchors(2);
  inst.radio_range = 0.3;
  inst.sigma = sigma;
  const Positions x = twenty_sensor_truth();
  inst.n_sensors = static_cast<int>(x.size());

  std::mt19937_64 rng = make_rng(seed, Stream::snl);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int i = 0; i < inst.n_sensors; ++i) {
    for (int j = i + 1; j < inst.n_sensors; ++j) {
      const double d = (x[i] - x[j]).norm();
      if (d <= inst.radio_range) inst.sensor_edges.push_back({i, j, perturb_distance(d, sigma * normal(rng))});
    }
  }
  for (int i = 0; i < inst.n_sensors; ++i) {
    for (int k = 0; k < 4; ++k) {
      const double e = (x[i] - inst.anchors[k]).norm();
      if (e <= inst.radio_range) inst.anchor_edges.push_back({i, k, perturb_distance(e, sigma * normal(rng))});
    }
  }
  inst.true_positions = x;
  return inst;
}

}  // namespace cpd
