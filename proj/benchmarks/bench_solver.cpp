#include <benchmark/benchmark.h>

#include "cpd/complementary.hpp"
#include "cpd/dual_solver.hpp"
#include "cpd/problems.hpp"
#include "cpd/saddle.hpp"
#include "cpd/snl.hpp"

namespace {

using namespace cpd;

void BM_EvaluateDualQuartic(benchmark::State& state) {
  const auto inst = quartic_instance(static_cast<int>(state.range(0)),
                                     static_cast<int>(state.range(1)), 7);
  const DualShift shift{Vector::Zero(inst.problem.n()), 0.1, 0.01};
  const Vector s = Vector::Constant(inst.problem.m(), 0.05);
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_dual(inst.problem, s, shift));
}
BENCHMARK(BM_EvaluateDualQuartic)->Args({20, 25})->Args({40, 60});

void BM_EvaluateDualSnl(benchmark::State& state) {
  const auto inst = gen_instance(static_cast<int>(state.range(0)), 2, 0.3, 0.001, 3);
  const auto problem = build_problem(inst);
  const DualShift shift{Vector::Constant(problem.n(), 0.5), 0.1, 0.01};
  const Vector s = Vector::Constant(problem.m(), 0.05);
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_dual(problem, s, shift));
}
BENCHMARK(BM_EvaluateDualSnl)->Arg(20)->Arg(50);

void BM_InnerSolve(benchmark::State& state) {
  const auto inst = quartic_instance(20, 25, 7);
  const PerturbationState p(Vector::Constant(20, 0.2), 0.1, 0.01);
  const Vector s0 = feasibility_restore(inst.problem, Vector::Zero(25), p.mu);
  BarrierConfig cfg;
  cfg.method = state.range(0) == 0 ? InnerMethod::newton : InnerMethod::bfgs;
  for (auto _ : state) benchmark::DoNotOptimize(maximize_perturbed_dual(inst.problem, p, s0, cfg));
}
BENCHMARK(BM_InnerSolve)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_FourMinima(benchmark::State& state) {
  const auto problem = problem_four_minima();
  OuterConfig cfg;
  cfg.x0 = four_minima_starts()[0];
  const Schedule sch{ScheduleKind::harmonic, 1.0, 0.1};
  for (auto _ : state) benchmark::DoNotOptimize(algorithm1(problem, sch, cfg, std::nullopt, 1));
}
BENCHMARK(BM_FourMinima)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
