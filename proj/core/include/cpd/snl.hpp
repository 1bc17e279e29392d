#pragma once
// Sensor network localization as a quartic least-squares problem:
//
//   min sum_{(i,j)} (||x_i - x_j||^2 - d_ij^2)^2 + sum_{(i,k)} (||x_i - a_k||^2 - e_ik^2)^2.
//
// Sensor and anchor indices are 0-based.

#include <cstdint>
#include <optional>
#include <vector>

#include "cpd/canonical.hpp"

namespace cpd {

using Positions = std::vector<Vector>;

struct SensorEdge {
  int i = 0;
  int j = 0;
  double distance = 0.0;
};

struct AnchorEdge {
  int i = 0;  // sensor
  int k = 0;  // anchor
  double distance = 0.0;
};

struct SNLInstance {
  int dim = 2;
  Positions anchors;
  int n_sensors = 0;
  std::vector<SensorEdge> sensor_edges;  // i < j
  std::vector<AnchorEdge> anchor_edges;
  double radio_range = 0.0;
  double sigma = 0.0;
  std::optional<Positions> true_positions;

  // Throws InvalidInput on bad dimensions, indices or non-positive distances.
  void validate() const;
};

// n = dim * N, A = 0, f = 0. A sensor edge contributes A_k = 2 (E_i - E_j)(E_i - E_j)^T,
// target d^2; an anchor edge A_k = 2 E_i E_i^T, b_k = 2 a_k (in block i), target
// e^2 - ||a_k||^2. All weights are 2, so P is exactly the sum of squared residuals.
CanonicalProblem build_problem(const SNLInstance& inst);

// Sum of squared edge residuals evaluated edge by edge.
double snl_objective(const SNLInstance& inst, const Positions& x);

// max(1 + xi, 0.1) * d
double perturb_distance(double d, double xi);

// Sensors uniform in [0, 1]^dim, anchors at the corners of [0.125, 0.875]^dim,
// edges wherever the true distance is <= radio_range, each stored distance
// perturbed by one N(0, sigma^2) draw.
SNLInstance gen_instance(int n_sensors, int dim, double radio_range, double sigma,
                         std::uint64_t seed);

// Anchors at the corners of [0.125, 0.875]^dim.
Positions default_anchors(int dim);

// Every sensor reaches an anchor through edges.
bool is_connected(const SNLInstance& inst);
// Greedy trilateration from the anchors localizes every sensor, each one
// needing dim + 1 already localized neighbours. Sufficient for a unique
// layout at generic positions.
bool is_trilaterable(const SNLInstance& inst);

double rmsd(const Positions& estimated, const Positions& truth);
// Smallest rmsd against any of the given exact layouts.
double rmsd_nearest(const Positions& estimated, const std::vector<Positions>& solutions);

Vector stack_positions(const Positions& p);
Positions unstack_positions(const Vector& x, int dim);

// 6 sensors, 4 anchors, noiseless, with true positions on the first branch.
// Sensor 1 (0-based) is tied to anchor 0 and sensor 5 only; sensors 2 and 4
// to anchors 2, 3 and each other. Each group can flip across a line, so the
// instance has four exact layouts.
SNLInstance fixture_six_sensors();
// All four exact layouts, the true one first.
std::vector<Positions> six_sensor_solutions();

// The published 20-sensor truth with edges within range 0.3 and noise of
// level sigma drawn from seed.
SNLInstance fixture_twenty_sensors(double sigma, std::uint64_t seed);
Positions twenty_sensor_truth();
// The truth and its one alternative: sensor 6 has only two neighbours in range
// and can be mirrored across the line joining them.
std::vector<Positions> twenty_sensor_solutions();

}  // namespace cpd
