#include "cpd/io.hpp"

#include <fstream>
#include <iomanip>
#include <ostream>
#include <string>

#include "cpd/errors.hpp"

namespace cpd {

using nlohmann::json;

namespace {

const json& field(const json& j, const char* key) {
  if (!j.is_object()) throw InvalidInput("expected a JSON object");
  const auto it = j.find(key);
  if (it == j.end()) throw InvalidInput(std::string("missing field \"") + key + "\"");
  return *it;
}

double number(const json& j, const std::string& what) {
  if (!j.is_number()) throw InvalidInput(what + " must be a number");
  return j.get<double>();
}

int integer(const json& j, const std::string& what) {
  if (!j.is_number_integer()) throw InvalidInput(what + " must be an integer");
  return j.get<int>();
}

Vector vector_of(const json& j, int expected, const std::string& what) {
  if (!j.is_array()) throw InvalidInput(what + " must be an array");
  if (expected >= 0 && static_cast<int>(j.size()) != expected) {
    throw InvalidInput(what + " must have " + std::to_string(expected) + " entries, got " +
                       std::to_string(j.size()));
  }
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = number(j[i], what);
  return v;
}

Matrix matrix_of(const json& j, int n, const std::string& what) {
  if (!j.is_array() || static_cast<int>(j.size()) != n) {
    throw InvalidInput(what + " must be an array of " + std::to_string(n) + " rows");
  }
  Matrix M(n, n);
  for (int r = 0; r < n; ++r) M.row(r) = vector_of(j[r], n, what + " row").transpose();
  return M;
}

json to_json(const Vector& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

json to_json(const Matrix& M) {
  json a = json::array();
  for (Eigen::Index r = 0; r < M.rows(); ++r) a.push_back(to_json(Vector(M.row(r).transpose())));
  return a;
}

json positions_json(const Positions& p) {
  json a = json::array();
  for (const auto& v : p) a.push_back(to_json(v));
  return a;
}

Positions positions_of(const json& j, int dim, const std::string& what) {
  if (!j.is_array()) throw InvalidInput(what + " must be an array");
  Positions out;
  for (const auto& row : j) out.push_back(vector_of(row, dim, what));
  return out;
}

}  // namespace

CanonicalProblem problem_from_json(const json& j) {
  const int n = integer(field(j, "n"), "n");
  const int m = integer(field(j, "m"), "m");
  if (n < 1 || m < 1) throw InvalidInput("n and m must be >= 1");
  const Matrix A = matrix_of(field(j, "A"), n, "A");
  const Vector f = vector_of(field(j, "f"), n, "f");
  const json& lam = field(j, "lambda");
  if (!lam.is_array() || static_cast<int>(lam.size()) != m) {
    throw InvalidInput("lambda must list m components");
  }
  std::vector<QuadraticComponent> comps;
  for (int k = 0; k < m; ++k) {
    const std::string what = "lambda[" + std::to_string(k) + "]";
    comps.emplace_back(matrix_of(field(lam[k], "A"), n, what + ".A"),
                       vector_of(field(lam[k], "b"), n, what + ".b"));
  }
  return CanonicalProblem(A, f, QuadraticMap(std::move(comps)),
                          LeastSquaresCanonical(vector_of(field(j, "targets"), m, "targets"),
                                                vector_of(field(j, "weights"), m, "weights")));
}

json problem_to_json(const CanonicalProblem& problem) {
  json lam = json::array();
  for (const auto& c : problem.map().components()) {
    lam.push_back({{"A", to_json(c.A())}, {"b", to_json(c.b())}});
  }
  return {{"n", problem.n()},
          {"m", problem.m()},
          {"A", to_json(problem.A())},
          {"f", to_json(problem.f())},
          {"lambda", std::move(lam)},
          {"targets", to_json(problem.canonical().targets())},
          {"weights", to_json(problem.canonical().weights())}};
}

SNLInstance snl_from_json(const json& j) {
  SNLInstance inst;
  inst.dim = integer(field(j, "dim"), "dim");
  inst.anchors = positions_of(field(j, "anchors"), inst.dim, "anchors");
  inst.n_sensors = integer(field(j, "n_sensors"), "n_sensors");
  const json& se = field(j, "sensor_edges");
  if (!se.is_array()) throw InvalidInput("sensor_edges must be an array");
  for (const auto& e : se) {
    if (!e.is_array() || e.size() != 3) throw InvalidInput("sensor edge must be [i, j, d]");
    inst.sensor_edges.push_back({integer(e[0], "edge index"), integer(e[1], "edge index"),
                                 number(e[2], "edge distance")});
  }
  const json& ae = field(j, "anchor_edges");
  if (!ae.is_array()) throw InvalidInput("anchor_edges must be an array");
  for (const auto& e : ae) {
    if (!e.is_array() || e.size() != 3) throw InvalidInput("anchor edge must be [i, k, e]");
    inst.anchor_edges.push_back({integer(e[0], "edge index"), integer(e[1], "edge index"),
                                 number(e[2], "edge distance")});
  }
  inst.sigma = number(field(j, "sigma"), "sigma");
  inst.radio_range = number(field(j, "radio_range"), "radio_range");
  if (const auto it = j.find("true_positions"); it != j.end() && !it->is_null()) {
    inst.true_positions = positions_of(*it, inst.dim, "true_positions");
  }
  inst.validate();
  return inst;
}

json snl_to_json(const SNLInstance& inst) {
  json se = json::array();
  for (const auto& e : inst.sensor_edges) se.push_back({e.i, e.j, e.distance});
  json ae = json::array();
  for (const auto& e : inst.anchor_edges) ae.push_back({e.i, e.k, e.distance});
  json j = {{"dim", inst.dim},
            {"anchors", positions_json(inst.anchors)},
            {"n_sensors", inst.n_sensors},
            {"sensor_edges", std::move(se)},
            {"anchor_edges", std::move(ae)},
            {"sigma", inst.sigma},
            {"radio_range", inst.radio_range}};
  if (inst.true_positions) j["true_positions"] = positions_json(*inst.true_positions);
  return j;
}

json result_to_json(const SaddleResult& r) {
  json j = {{"x_bar", to_json(r.x_bar)},
            {"s_bar", to_json(r.s_bar)},
            {"primal_value", r.primal_value},
            {"grad_norm", r.grad_norm},
            {"dual_value", r.dual_value},
            {"x_saddle", to_json(r.x_saddle)},
            {"primal_saddle", r.primal_saddle},
            {"canonical_residual", r.canonical_residual},
            {"equilibrium_residual", r.equilibrium_residual},
            {"min_eig_G", r.min_eig_G},
            {"degeneracy", std::string(to_string(r.degeneracy))},
            {"outer_iters", r.outer_iters},
            {"status", std::string(to_string(r.status))},
            {"certificate", std::string(to_string(r.certificate))},
            {"max_descent_violation", r.max_descent_violation},
            {"descent_warnings", r.descent_warnings}};
  if (r.refinement) {
    j["refinement"] = {{"iters", r.refinement->iters},
                       {"status", std::string(to_string(r.refinement->status))},
                       {"grad_norm", r.refinement->grad_norm}};
  }
  return j;
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InvalidInput(path.string() + ": " + e.what());
  }
}

void write_json_file(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

void write_history_csv(std::ostream& os, const std::vector<IterationRecord>& history) {
  const auto old = os.precision(17);
  os << "iter,rho,mu,xi,primal,dual,step_x,step_s,min_eig_G,canonical_residual\n";
  for (const auto& h : history) {
    os << h.iter << ',' << h.rho << ',' << h.mu << ',' << h.xi << ',' << h.primal << ','
       << h.dual << ',' << h.step_x << ',' << h.step_s << ',' << h.min_eig_G << ','
       << h.canonical_residual << '\n';
  }
  os.precision(old);
}

void write_positions_csv(std::ostream& os, const Positions& estimated,
                         const std::optional<Positions>& truth) {
  if (truth && truth->size() != estimated.size()) {
    throw InvalidInput("positions csv: estimate and truth differ in length");
  }
  const int dim = estimated.empty() ? 2 : static_cast<int>(estimated.front().size());
  static constexpr const char* axis[] = {"x", "y", "z"};
  const auto old = os.precision(17);
  os << "sensor_index";
  for (int c = 0; c < dim; ++c) os << ",est_" << axis[c];
  if (truth) {
    for (int c = 0; c < dim; ++c) os << ",true_" << axis[c];
    os << ",error";
  }
  os << '\n';
  for (std::size_t i = 0; i < estimated.size(); ++i) {
    os << i;
    for (int c = 0; c < dim; ++c) os << ',' << estimated[i](c);
    if (truth) {
      for (int c = 0; c < dim; ++c) os << ',' << (*truth)[i](c);
      os << ',' << (estimated[i] - (*truth)[i]).norm();
    }
    os << '\n';
  }
  os.precision(old);
}

}  // namespace cpd
