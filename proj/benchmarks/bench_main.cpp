#include <benchmark/benchmark.h>

#include <vector>

#include "drmgfe/noise/covariance.hpp"
#include "drmgfe/noise/path_context.hpp"
#include "drmgfe/schemes/integrate.hpp"
#include "drmgfe/study/harness.hpp"

namespace {

using drmgfe::fem::FemSpace;
using drmgfe::fem::Mesh;
using drmgfe::fem::StateVector;
using drmgfe::noise::CovarianceModel;
using drmgfe::noise::PathContext;

void BM_CellTicks(benchmark::State& state) {
  const PathContext ctx(1, 0, 1 << 20, 1e-6, 100);
  std::vector<std::int64_t> row(100);
  std::int64_t cell = 0;
  for (auto _ : state) {
    ctx.fill_cell_ticks(cell++ & ((1 << 20) - 1), row);
    benchmark::DoNotOptimize(row.data());
  }
  state.SetItemsProcessed(state.iterations() * 100);
}
BENCHMARK(BM_CellTicks);

void BM_ResolventCg(benchmark::State& state) {
  const FemSpace space(Mesh::build(static_cast<int>(state.range(0)), static_cast<int>(state.range(1))));
  const StateVector v = StateVector::Ones(static_cast<Eigen::Index>(space.dof_count()));
  for (auto _ : state) benchmark::DoNotOptimize(space.resolvent_solve(1e-3, v));
}
BENCHMARK(BM_ResolventCg)->Args({1, 128})->Args({1, 512})->Args({2, 32})->Args({2, 128});

void BM_ResolventCached(benchmark::State& state) {
  const FemSpace space(Mesh::build(static_cast<int>(state.range(0)), static_cast<int>(state.range(1))));
  const drmgfe::fem::CachedResolvent cached(space, 1e-3);
  const StateVector v = StateVector::Ones(static_cast<Eigen::Index>(space.dof_count()));
  for (auto _ : state) benchmark::DoNotOptimize(cached.apply(v));
}
BENCHMARK(BM_ResolventCached)->Args({1, 128})->Args({1, 512})->Args({2, 32})->Args({2, 128});

void BM_NoiseField(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  const FemSpace space(Mesh::build(dim, static_cast<int>(state.range(1))));
  const CovarianceModel cov(space, drmgfe::noise::ModeSpec::default_for(dim));
  const Eigen::VectorXd inc = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(cov.mode_count()));
  for (auto _ : state) benchmark::DoNotOptimize(cov.field_at_nodes(inc));
}
BENCHMARK(BM_NoiseField)->Args({1, 128})->Args({1, 512})->Args({2, 32})->Args({2, 128});

void BM_DrmgfeStep(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  const FemSpace space(Mesh::build(dim, static_cast<int>(state.range(1))));
  const CovarianceModel cov(space, drmgfe::noise::ModeSpec::default_for(dim));
  const auto problem = drmgfe::problem::make_model_problem(0.5, dim);
  const drmgfe::schemes::LevelStepper stepper(space, cov, problem, 1e-3);
  const PathContext ctx(1, 0, 1000, 1e-6, cov.mode_count());
  const drmgfe::schemes::StepInputs in{1e-3, {400, 1000}, ctx.increments(0, 400), ctx.increments(0, 1000)};
  const StateVector u = space.l2_project(problem.initial);
  for (auto _ : state) benchmark::DoNotOptimize(stepper.drmgfe_step(u, in));
}
BENCHMARK(BM_DrmgfeStep)->Args({1, 128})->Args({2, 32});

void BM_StudySample(benchmark::State& state) {
  auto config = drmgfe::study::make_preset(drmgfe::study::Preset::Desk, drmgfe::study::StudyAxis::Time, 1);
  config.reference_dt = 7.8125e-5;  // 1/8 of the finest level keeps one sample short
  const drmgfe::study::StudyPlan plan(config);
  std::uint64_t sample = 0;
  for (auto _ : state) benchmark::DoNotOptimize(plan.squared_errors(plan.simulate(sample++)));
}
BENCHMARK(BM_StudySample)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
