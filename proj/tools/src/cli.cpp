#include "cpd/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <thread>

#include "cpd/errors.hpp"
#include "cpd/io.hpp"
#include "cpd/problems.hpp"
#include "cpd/saddle.hpp"
#include "cpd/snl.hpp"

namespace cpd::cli {

namespace fs = std::filesystem;

namespace {

struct SolverFlags {
  double rho0 = 0.1;
  std::string schedule = "constant";
  double mu_ratio = 0.1;
  double eps = 1e-6;
  double eps_canonical = 1e-4;
  int max_outer = 200;
  std::uint64_t seed = 1;
  bool refine = false;
  CLI::Option* refine_opt = nullptr;
  bool fast_path = false;
  std::string out = ".";
};

void add_solver_flags(CLI::App& app, SolverFlags& f) {
  app.add_option("--rho0", f.rho0, "proximal weight at k = 1")->capture_default_str();
  app.add_option("--schedule", f.schedule, "constant or harmonic (rho0 / k)")
      ->check(CLI::IsMember({"constant", "harmonic"}))
      ->capture_default_str();
  app.add_option("--mu-ratio", f.mu_ratio, "mu_k / rho_k, in (0, 1)")->capture_default_str();
  app.add_option("--eps", f.eps, "outer stopping tolerance on the step")->capture_default_str();
  app.add_option("--eps-canonical", f.eps_canonical, "canonical residual accepted as a solution")
      ->capture_default_str();
  app.add_option("--max-outer", f.max_outer, "outer iteration cap")->capture_default_str();
  app.add_option("--seed", f.seed, "seed for every random draw")->capture_default_str();
  f.refine_opt = app.add_flag("--refine,!--no-refine", f.refine,
                              "always / never refine (default: when the residual is large)");
  app.add_flag("--fast-path", f.fast_path, "try the non-degenerate dual first");
  app.add_option("--out", f.out, "output directory")->capture_default_str();
}

Schedule schedule_of(const SolverFlags& f) {
  Schedule s{f.schedule == "harmonic" ? ScheduleKind::harmonic : ScheduleKind::constant, f.rho0,
             f.mu_ratio};
  s.validate();
  return s;
}

OuterConfig config_of(const SolverFlags& f, RefinePolicy fallback) {
  OuterConfig cfg;
  cfg.eps_step = f.eps;
  cfg.eps_canonical = f.eps_canonical;
  cfg.max_outer = f.max_outer;
  cfg.refine_policy = fallback;
  if (f.refine_opt != nullptr && f.refine_opt->count() > 0) {
    cfg.refine_policy = f.refine ? RefinePolicy::always : RefinePolicy::never;
  }
  cfg.validate();
  return cfg;
}

SaddleResult solve_with(const CanonicalProblem& problem, const SolverFlags& f,
                        RefinePolicy fallback) {
  const Schedule sch = schedule_of(f);
  const OuterConfig cfg = config_of(f, fallback);
  if (f.fast_path) {
    SaddleResult r = nondegenerate_solve(problem, cfg);
    if (r.certificate == Certificate::unique_global) return r;
  }
  return algorithm2(problem, sch, cfg, f.seed);
}

void write_outputs(const fs::path& dir, const SaddleResult& r) {
  fs::create_directories(dir);
  write_json_file(dir / "result.json", result_to_json(r));
  std::ofstream hist(dir / "history.csv");
  if (!hist) throw InvalidInput("cannot write " + (dir / "history.csv").string());
  write_history_csv(hist, r.history);
}

void print_summary(std::ostream& out, const SaddleResult& r) {
  out << std::setprecision(17) << "status " << to_string(r.status) << "\ncertificate "
      << to_string(r.certificate) << "\nouter_iters " << r.outer_iters << "\nprimal_value "
      << r.primal_value << "\nprimal_saddle " << r.primal_saddle << "\ncanonical_residual "
      << r.canonical_residual << '\n';
}

int exit_code(const SaddleResult& r) {
  return r.status == SolveStatus::diverged ? kExitSolver : kExitOk;
}

// quartic-bench ----------------------------------------------------------------

struct BenchFlags {
  int n = 20;
  int m = 25;
  int seeds = 10;
  std::uint64_t first_seed = 1;
  int rank = 0;
  double scale = QuarticOptions{}.scale;
  double x_box = QuarticOptions{}.x_box;
  int jobs = 1;
  double success_tol = 1e-4;
};

struct BenchRow {
  std::uint64_t seed = 0;
  double before = 0.0;
  double after = 0.0;
  double error = 0.0;
  bool success = false;
  int outer_iters = 0;
  SolveStatus status = SolveStatus::max_iters;
  Certificate certificate = Certificate::none;
  double seconds = 0.0;
};

int quartic_bench(const BenchFlags& b, const SolverFlags& f, std::ostream& out) {
  if (b.n < 1 || b.m < 1) throw InvalidInput("quartic-bench: need n >= 1 and m >= 1");
  if (b.seeds < 1) throw InvalidInput("quartic-bench: need at least one seed");
  if (b.jobs < 1) throw InvalidInput("quartic-bench: --jobs must be >= 1");
  const QuarticOptions qo{b.rank, b.scale, b.x_box};
  const Schedule sch = schedule_of(f);
  const OuterConfig cfg = config_of(f, RefinePolicy::always);

  std::vector<BenchRow> rows(static_cast<std::size_t>(b.seeds));
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  auto worker = [&] {
    for (int i = next++; i < b.seeds && !failed; i = next++) {
      try {
        BenchRow& row = rows[static_cast<std::size_t>(i)];
        row.seed = b.first_seed + static_cast<std::uint64_t>(i);
        const auto t0 = std::chrono::steady_clock::now();
        const QuarticInstance inst = quartic_instance(b.n, b.m, row.seed, qo);
        const SaddleResult r = algorithm2(inst.problem, sch, cfg, row.seed);
        row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        row.before = r.primal_saddle;
        row.after = r.primal_value;
        row.error = sign_invariant_error(r.x_bar, inst.x_true);
        row.success = row.error <= b.success_tol;
        row.outer_iters = r.outer_iters;
        row.status = r.status;
        row.certificate = r.certificate;
      } catch (...) {
        if (!failed.exchange(true)) failure = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int j = 1; j < std::min(b.jobs, b.seeds); ++j) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);

  fs::create_directories(f.out);
  const fs::path csv_path = fs::path(f.out) / "quartic_bench.csv";
  std::ofstream csv(csv_path);
  if (!csv) throw InvalidInput("cannot write " + csv_path.string());
  csv << std::setprecision(17)
      << "seed,primal_before,primal_after,max_abs_error,success,outer_iters,status,certificate,"
         "seconds\n";
  int successes = 0;
  std::vector<double> before;
  for (const auto& row : rows) {
    csv << row.seed << ',' << row.before << ',' << row.after << ',' << row.error << ','
        << (row.success ? 1 : 0) << ',' << row.outer_iters << ',' << to_string(row.status) << ','
        << to_string(row.certificate) << ',' << row.seconds << '\n';
    successes += row.success ? 1 : 0;
    before.push_back(row.before);
  }
  std::sort(before.begin(), before.end());
  const std::size_t h = before.size() / 2;
  const double median = before.size() % 2 ? before[h] : 0.5 * (before[h - 1] + before[h]);
  out << std::setprecision(17) << "seeds " << b.seeds << "\nsuccesses " << successes
      << "\nsuccess_rate " << static_cast<double>(successes) / b.seeds
      << "\nmedian_primal_before " << median << "\ncsv " << csv_path.string() << '\n';
  return kExitOk;
}

// snl --------------------------------------------------------------------------

struct GenFlags {
  int sensors = 20;
  int dim = 2;
  double range = 0.3;
  double sigma = 0.001;
  std::uint64_t seed = 1;
  std::string fixture = "none";
  std::string out = "instance.json";
};

int snl_gen(const GenFlags& g, std::ostream& out) {
  SNLInstance inst;
  if (g.fixture == "six") {
    inst = fixture_six_sensors();
  } else if (g.fixture == "twenty") {
    inst = fixture_twenty_sensors(g.sigma, g.seed);
  } else {
    inst = gen_instance(g.sensors, g.dim, g.range, g.sigma, g.seed);
  }
  const fs::path path(g.out);
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  write_json_file(path, snl_to_json(inst));
  out << "sensors " << inst.n_sensors << "\nsensor_edges " << inst.sensor_edges.size()
      << "\nanchor_edges " << inst.anchor_edges.size() << "\nconnected "
      << (is_connected(inst) ? "yes" : "no") << "\ninstance " << path.string() << '\n';
  return kExitOk;
}

int snl_solve(const std::string& instance_path, const SolverFlags& f, std::ostream& out) {
  const SNLInstance inst = snl_from_json(read_json_file(instance_path));
  const SaddleResult r = solve_with(build_problem(inst), f, RefinePolicy::automatic);
  write_outputs(f.out, r);
  const Positions est = unstack_positions(r.x_bar, inst.dim);
  std::ofstream pos(fs::path(f.out) / "positions.csv");
  if (!pos) throw InvalidInput("cannot write positions.csv");
  write_positions_csv(pos, est, inst.true_positions);
  print_summary(out, r);
  if (inst.true_positions) {
    out << "rmsd " << rmsd(est, *inst.true_positions) << "\nrmsd_saddle "
        << rmsd(unstack_positions(r.x_saddle, inst.dim), *inst.true_positions) << '\n';
  }
  return exit_code(r);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Canonical primal-dual solver for quartic least-squares problems"};
  app.name(args.empty() ? "cpd" : fs::path(args.front()).filename().string());
  app.require_subcommand(1);

  SolverFlags solve_flags;
  std::string problem_path;
  auto* solve = app.add_subcommand("solve", "solve a problem given as JSON");
  solve->add_option("problem", problem_path, "problem JSON")->required();
  add_solver_flags(*solve, solve_flags);

  SolverFlags bench_solver;
  bench_solver.max_outer = 50;
  BenchFlags bench;
  auto* qb = app.add_subcommand("quartic-bench", "planted quartic instances over many seeds");
  qb->add_option("--n", bench.n, "unknowns")->capture_default_str();
  qb->add_option("--m", bench.m, "quadratic equations")->capture_default_str();
  qb->add_option("--seeds", bench.seeds, "number of seeds")->capture_default_str();
  qb->add_option("--first-seed", bench.first_seed, "first seed")->capture_default_str();
  qb->add_option("--rank", bench.rank, "rank of each A_i (0: full)")->capture_default_str();
  qb->add_option("--scale", bench.scale, "entry scale of the factors")->capture_default_str();
  qb->add_option("--x-box", bench.x_box, "planted solution box")->capture_default_str();
  qb->add_option("--jobs", bench.jobs, "worker threads")->capture_default_str();
  add_solver_flags(*qb, bench_solver);

  auto* snl = app.add_subcommand("snl", "sensor network localization");
  snl->require_subcommand(1);
  GenFlags gen;
  auto* snl_gen_cmd = snl->add_subcommand("gen", "write a seeded instance");
  snl_gen_cmd->add_option("--sensors", gen.sensors, "sensor count")->capture_default_str();
  snl_gen_cmd->add_option("--dim", gen.dim, "2 or 3")->capture_default_str();
  snl_gen_cmd->add_option("--range", gen.range, "radio range")->capture_default_str();
  snl_gen_cmd->add_option("--sigma", gen.sigma, "noise level")->capture_default_str();
  snl_gen_cmd->add_option("--seed", gen.seed, "seed")->capture_default_str();
  snl_gen_cmd->add_option("--fixture", gen.fixture, "none, six or twenty")
      ->check(CLI::IsMember({"none", "six", "twenty"}))
      ->capture_default_str();
  snl_gen_cmd->add_option("--out", gen.out, "instance JSON path")->capture_default_str();
  SolverFlags snl_flags;
  std::string instance_path;
  auto* snl_solve_cmd = snl->add_subcommand("solve", "localize the sensors of an instance");
  snl_solve_cmd->add_option("instance", instance_path, "instance JSON")->required();
  add_solver_flags(*snl_solve_cmd, snl_flags);

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  if (argv.empty()) argv.push_back("cpd");
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitInput;
  }

  try {
    if (solve->parsed()) {
      const CanonicalProblem problem = problem_from_json(read_json_file(problem_path));
      const SaddleResult r = solve_with(problem, solve_flags, RefinePolicy::automatic);
      write_outputs(solve_flags.out, r);
      print_summary(out, r);
      return exit_code(r);
    }
    if (qb->parsed()) return quartic_bench(bench, bench_solver, out);
    if (snl_gen_cmd->parsed()) return snl_gen(gen, out);
    if (snl_solve_cmd->parsed()) return snl_solve(instance_path, snl_flags, out);
  } catch (const InvalidInput& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const Unsupported& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::exception& e) {
    err << "solver failure: " << e.what() << '\n';
    return kExitSolver;
  }
  return kExitInput;
}

}  // namespace cpd::cli
